// Linearize the segway at upright, design a lean PD controller and run it on
// the nonlinear model from a 0.05 rad lean.
#include <cmath>
#include <iostream>

#include <fmt/format.h>

#include "engcalc/engcalc.hpp"

using namespace engcalc;

int main() {
    const auto model = mech::make_model("segway");
    const auto design = lti::design_lean_pd(model, 3.0, 0.9);

    fmt::print("open-loop eigenvalues:\n");
    for (const Complex& p : ode::eigenvalues(design.linear.A)) fmt::print("  {:+.5f} {:+.5f}i\n", p.real(), p.imag());
    fmt::print("lean plant:  {}\n", lti::to_string(design.plant));
    fmt::print("kp = {:.4f}, kd = {:.4f}, precomp = {:.4f}\n", design.gains.kp, design.gains.kd, design.precomp);
    fmt::print("closed loop: {}\n", lti::to_string(design.closed_loop));

    const auto states = mech::simulate(model, lti::lean_pd_controller(design), Vec{0.0, 0.05}, Vec{0.0, 0.0}, 5.0, 1e-3);
    for (std::size_t k = 0; k < states.size(); k += 500) {
        fmt::print("t = {:4.1f}  cart = {:+.4f} m  lean = {:+.6f} rad\n", states.time(k), states.value(k, 0),
                   states.value(k, 1));
    }
}
