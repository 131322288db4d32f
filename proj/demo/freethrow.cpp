// Free-throw release velocities: the linear solve for a few flight times,
// then the three optimization modes.
#include <iostream>

#include <fmt/format.h>

#include "engcalc/engcalc.hpp"

using namespace engcalc;

int main() {
    const opt::FreeThrowParams params;
    fmt::print("release at ({}, {}), hoop at ({}, {})\n", params.p0[0], params.p0[1], params.p_h[0], params.p_h[1]);
    for (double tf : {0.6, 0.8, 1.0, 1.2}) {
        const Vec v = opt::freethrow_linear(params, tf);
        fmt::print("tf = {:.1f} s  ->  v = ({:.4f}, {:.4f}) m/s\n", tf, v[0], v[1]);
    }

    const auto show = [](const char* name, const opt::FreeThrowResult& r) {
        fmt::print("{:<12} v = ({:.4f}, {:.4f})  tf = {:.4f}  miss = {:.2e}  iters = {}\n", name, r.v[0], r.v[1], r.tf,
                   r.miss_distance, r.iterations);
    };
    show("free", opt::freethrow_opt(params, opt::FreeMode{}));
    show("fixed tf", opt::freethrow_opt(params, opt::FixedTf{0.9}));
    show("fixed speed", opt::freethrow_opt(params, opt::FixedSpeed{8.5}));

    const auto g = opt::gymnast_optimize({});
    fmt::print("\ngymnast drop: tf = {:.4f} s, omega = {:.2e}\n", g.tf, g.omega);
    const auto d = opt::diver_optimize({});
    fmt::print("diver: v0 = ({:.4f}, {:.4f}), L = {:.4f}, tuck [{:.3f}, {:.3f}] of {:.3f} s\n", d.v0[0], d.v0[1], d.L,
               d.t_tuck_start, d.t_tuck_end, d.t_entry);
}
