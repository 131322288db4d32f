#pragma once

// Numerical limits and derivatives. Everything here uses central differences
// except one_sided_limit, which walks x0 + s/eta for growing eta.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <string>

#include "engcalc/error.hpp"
#include "engcalc/linalg.hpp"

namespace engcalc::diff {

struct DiffConfig {
    double h = 1e-5;
    // Step becomes h * max(1, |x|) so large arguments do not lose the step to rounding.
    bool relative = true;

    static constexpr DiffConfig first_order() { return {1e-5, true}; }
    static constexpr DiffConfig second_order() { return {1e-4, true}; }

    [[nodiscard]] double step_at(double x) const {
        if (!(h > 0.0)) throw DomainError("DiffConfig: h must be positive");
        return relative ? h * std::max(1.0, std::abs(x)) : h;
    }
};

template <class F>
concept ScalarFunction = std::invocable<const F&, double>;

template <class F>
concept FieldFunction = std::invocable<const F&, const Vec&>;

enum class Side { left, right };

// Limit of f(x) as x -> x0 from one side, evaluated at x0 + s/eta for eta = 2^k,
// k = 4..48, s = +1 (right) or -1 (left). f is never evaluated at x0. Returns
// the newest value once three consecutive values agree within tol.
template <ScalarFunction F>
double one_sided_limit(const F& f, double x0, Side side, double tol) {
    if (!(tol > 0.0)) throw DomainError("one_sided_limit: tol must be positive");
    constexpr int kFirst = 4;
    constexpr int kLast = 48;
    constexpr double kBlowUp = 1e12;
    const double s = side == Side::right ? 1.0 : -1.0;
    double prev2 = 0.0;
    double prev1 = 0.0;
    for (int k = kFirst; k <= kLast; ++k) {
        const double x = x0 + s * std::ldexp(1.0, -k);
        if (x == x0) break; // offset lost to rounding at this magnitude
        const double y = f(x);
        if (!std::isfinite(y) || std::abs(y) > kBlowUp) {
            throw ConvergenceError("one_sided_limit: values diverge approaching " + std::to_string(x0));
        }
        if (k >= kFirst + 2 && std::abs(y - prev1) <= tol && std::abs(prev1 - prev2) <= tol) return y;
        prev2 = prev1;
        prev1 = y;
    }
    throw ConvergenceError("one_sided_limit: values did not settle approaching " + std::to_string(x0));
}

namespace detail {

inline double checked(double y, const char* op) {
    if (!std::isfinite(y)) throw DomainError(std::string(op) + ": non-finite function value");
    return y;
}

} // namespace detail

// Central difference with the configured step. The step actually used is the
// representable distance (x0 + h) - (x0 - h), which removes argument rounding.
template <ScalarFunction F>
double derivative(const F& f, double x0, const DiffConfig& cfg = DiffConfig::first_order()) {
    const double h = cfg.step_at(x0);
    const double xp = x0 + h;
    const double xm = x0 - h;
    const double fp = detail::checked(f(xp), "derivative");
    const double fm = detail::checked(f(xm), "derivative");
    return (fp - fm) / (xp - xm);
}

// d/dh F(x0 + h e_i) at h = 0.
template <FieldFunction F>
double partial_derivative(const F& fn, const Vec& x0, std::size_t i, const DiffConfig& cfg = DiffConfig::first_order()) {
    if (i >= x0.size()) {
        throw DimensionError("partial_derivative: index " + std::to_string(i) + " out of range for n = " +
                             std::to_string(x0.size()));
    }
    const double h = cfg.step_at(x0[i]);
    Vec xp = x0;
    Vec xm = x0;
    xp[i] = x0[i] + h;
    xm[i] = x0[i] - h;
    const double fp = detail::checked(fn(xp), "partial_derivative");
    const double fm = detail::checked(fn(xm), "partial_derivative");
    return (fp - fm) / (xp[i] - xm[i]);
}

template <FieldFunction F>
Vec gradient(const F& fn, const Vec& x0, const DiffConfig& cfg = DiffConfig::first_order()) {
    Vec g(x0.size());
    for (std::size_t i = 0; i < x0.size(); ++i) g[i] = partial_derivative(fn, x0, i, cfg);
    return g;
}

// m x n matrix of partials of a vector field G: R^n -> R^m.
template <FieldFunction G>
Mat jacobian(const G& fn, const Vec& x0, const DiffConfig& cfg = DiffConfig::first_order()) {
    const std::size_t n = x0.size();
    Mat jac;
    for (std::size_t j = 0; j < n; ++j) {
        const double h = cfg.step_at(x0[j]);
        Vec xp = x0;
        Vec xm = x0;
        xp[j] = x0[j] + h;
        xm[j] = x0[j] - h;
        const Vec gp = fn(xp);
        const Vec gm = fn(xm);
        if (gp.size() != gm.size()) throw DimensionError("jacobian: output length varies");
        if (!gp.all_finite() || !gm.all_finite()) throw DomainError("jacobian: non-finite function value");
        if (j == 0) jac = Mat(gp.size(), n);
        if (gp.size() != jac.rows()) throw DimensionError("jacobian: output length varies");
        const double width = xp[j] - xm[j];
        for (std::size_t i = 0; i < gp.size(); ++i) jac(i, j) = (gp[i] - gm[i]) / width;
    }
    return jac;
}

// Second-order central differences, then symmetrized (H + H^T) / 2 so the
// result is exactly symmetric.
template <FieldFunction F>
Mat hessian(const F& fn, const Vec& x0, const DiffConfig& cfg = DiffConfig::second_order()) {
    const std::size_t n = x0.size();
    Mat hes(n, n);
    const double f0 = detail::checked(fn(x0), "hessian");
    std::vector<double> step(n);
    for (std::size_t i = 0; i < n; ++i) step[i] = cfg.step_at(x0[i]);
    const auto at = [&](std::size_t i, double si, std::size_t j, double sj) {
        Vec x = x0;
        x[i] += si * step[i];
        x[j] += sj * step[j];
        return detail::checked(fn(x), "hessian");
    };
    for (std::size_t i = 0; i < n; ++i) {
        hes(i, i) = (at(i, 1.0, i, 0.0) - 2.0 * f0 + at(i, -1.0, i, 0.0)) / (step[i] * step[i]);
        for (std::size_t j = 0; j < i; ++j) {
            const double v = (at(i, 1.0, j, 1.0) - at(i, 1.0, j, -1.0) - at(i, -1.0, j, 1.0) + at(i, -1.0, j, -1.0)) /
                             (4.0 * step[i] * step[j]);
            hes(i, j) = v;
            hes(j, i) = v;
        }
    }
    // The off-diagonal stencil is already symmetric; averaging makes that explicit.
    return 0.5 * (hes + transpose(hes));
}

} // namespace engcalc::diff
