// Compares the basic quadrature rules on a text integrand, then a few
// improper integrals and the derivative of a numeric antiderivative.
#include <cmath>
#include <iostream>
#include <numbers>

#include <fmt/format.h>

#include "engcalc/engcalc.hpp"

using namespace engcalc;

int main(int argc, char** argv) {
    const std::string text = argc > 1 ? argv[1] : "sin(x)";
    const auto f = expr::function_of(text, "x");
    const quad::Interval iv{0.0, std::numbers::pi};

    fmt::print("integral of {} over [0, pi]\n", text);
    fmt::print("{:>6} {:>18} {:>18} {:>18}\n", "n", "midpoint", "trapezoid", "simpson");
    for (std::size_t n = 4; n <= 256; n *= 4) {
        fmt::print("{:>6} {:>18.12f} {:>18.12f} {:>18.12f}\n", n,
                   quad::riemann_sum(f, iv, n, quad::RiemannScheme::midpoint), quad::trapezoid(f, iv, n),
                   quad::simpson(f, iv, n));
    }
    const auto b = quad::darboux_bounds(f, iv, 64, 16);
    fmt::print("darboux bounds (64 panels): [{:.8f}, {:.8f}]\n\n", b.lower, b.upper);

    const auto gauss = [](double x) { return std::exp(-x * x); };
    fmt::print("int exp(-x^2) over R   = {:.10f}  (sqrt(pi) = {:.10f})\n", quad::improper_whole_line(gauss, 1e-10),
               std::sqrt(std::numbers::pi));
    try {
        (void)quad::improper_type1([](double x) { return 1.0 / x; }, 1.0, 1e-8);
    } catch (const ConvergenceError& e) {
        fmt::print("int 1/x over [1, inf): {}\n", e.what());
    }

    const auto F = quad::antiderivative_numeric(f, 0.0);
    fmt::print("\nd/dx of the numeric antiderivative at x = 1: {:.10f} (f(1) = {:.10f})\n", diff::derivative(F, 1.0),
               f(1.0));
}
