#pragma once

// Fixed-step initial-value integrators, matrix exponential, characteristic
// polynomial (Faddeev-LeVerrier) and eigenvalues of small matrices.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "engcalc/error.hpp"
#include "engcalc/linalg.hpp"
#include "engcalc/poly.hpp"
#include "engcalc/signal.hpp"

namespace engcalc::ode {

using Rhs = std::function<Vec(double, const Vec&)>;

struct IvpProblem {
    Rhs rhs;
    Vec x0;
    double t0 = 0.0;
    double tf = 1.0;
};

namespace detail {

inline Vec eval_rhs(const Rhs& rhs, double t, const Vec& x) {
    Vec dx = rhs(t, x);
    if (dx.size() != x.size()) throw DimensionError("ode: rhs output dimension differs from state dimension");
    if (!dx.all_finite()) throw DomainError("ode: rhs returned non-finite value at t = " + std::to_string(t));
    return dx;
}

// Upper bound on grid points, so a typo in T or dt fails fast instead of exhausting memory.
inline constexpr double kMaxSteps = 1e7;

// Time grid t0, t0 + dt, ... ending exactly on tf; the last step is shortened
// when (tf - t0) is not a multiple of dt.
inline std::vector<double> time_grid(double t0, double tf, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("ode: dt must be positive");
    if (!(tf > t0)) throw DomainError("ode: need tf > t0");
    const double span = tf - t0;
    if (!(span / dt <= kMaxSteps)) throw DomainError("ode: (tf - t0) / dt exceeds the step limit");
    const auto full = static_cast<std::size_t>(std::floor(span / dt * (1.0 + 1e-12)));
    std::vector<double> t;
    t.reserve(full + 2);
    for (std::size_t k = 0; k <= full; ++k) t.push_back(t0 + static_cast<double>(k) * dt);
    if (tf - t.back() > 1e-9 * dt) {
        t.push_back(tf);
    } else {
        t.back() = tf;
    }
    if (t.size() < 2) t = {t0, tf};
    return t;
}

inline std::vector<std::string> state_names(std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
    return names;
}

} // namespace detail

// One classic RK4 step of size h.
inline Vec rk4_step(const Rhs& rhs, double t, const Vec& x, double h) {
    const Vec k1 = detail::eval_rhs(rhs, t, x);
    const Vec k2 = detail::eval_rhs(rhs, t + 0.5 * h, x + (0.5 * h) * k1);
    const Vec k3 = detail::eval_rhs(rhs, t + 0.5 * h, x + (0.5 * h) * k2);
    const Vec k4 = detail::eval_rhs(rhs, t + h, x + h * k3);
    Vec next = x;
    for (std::size_t i = 0; i < x.size(); ++i) next[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return next;
}

inline Vec euler_step(const Rhs& rhs, double t, const Vec& x, double h) { return x + h * detail::eval_rhs(rhs, t, x); }

namespace detail {

template <class Step>
SampledSignal march(const IvpProblem& prob, double dt, Step step) {
    if (!prob.x0.all_finite()) throw DomainError("ode: non-finite initial state");
    const auto grid = time_grid(prob.t0, prob.tf, dt);
    SampledSignal out(prob.x0.size(), state_names(prob.x0.size()));
    Vec x = prob.x0;
    out.push_back(grid[0], x);
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        x = step(prob.rhs, grid[k], x, grid[k + 1] - grid[k]);
        if (!x.all_finite()) throw DomainError("ode: state became non-finite at t = " + std::to_string(grid[k + 1]));
        out.push_back(grid[k + 1], x);
    }
    return out;
}

} // namespace detail

inline SampledSignal euler_solve(const IvpProblem& prob, double dt) { return detail::march(prob, dt, euler_step); }
inline SampledSignal rk4_solve(const IvpProblem& prob, double dt) { return detail::march(prob, dt, rk4_step); }

// exp(A t) by scaling and squaring: s = max(0, ceil(log2 ||A t||_inf) + 1),
// Taylor series of exp(A t / 2^s) until a term is < 1e-16 of the partial sum
// (infinity norms), then s squarings.
inline Mat matrix_exponential(const Mat& a, double t) {
    if (!a.square()) throw DimensionError("matrix_exponential: matrix not square");
    const std::size_t n = a.rows();
    Mat m = a * t;
    const double norm = norm_inf(m);
    int s = 0;
    if (norm > 0.0) s = std::max(0, static_cast<int>(std::ceil(std::log2(norm))) + 1);
    m *= std::ldexp(1.0, -s);

    Mat sum = Mat::identity(n);
    Mat term = Mat::identity(n);
    for (int k = 1; k < 200; ++k) {
        term = matmul(term, m) * (1.0 / k);
        sum += term;
        if (norm_inf(term) < 1e-16 * norm_inf(sum)) break;
    }
    for (int i = 0; i < s; ++i) sum = matmul(sum, sum);
    return sum;
}

// Faddeev-LeVerrier recursion. With c_n = 1 and M_0 = 0:
//   M_k = A M_{k-1} + c_{n-k+1} I,   c_{n-k} = -tr(A M_k) / k.
// `adjugate_terms[k-1]` holds M_k, so adj(sI - A) = sum_k M_k s^(n-k).
struct FaddeevResult {
    Polynomial char_poly;
    std::vector<Mat> adjugate_terms;
};

inline constexpr std::size_t kMaxEigenDimension = 12;

inline FaddeevResult faddeev_leverrier(const Mat& a) {
    if (!a.square()) throw DimensionError("char_poly: matrix not square");
    const std::size_t n = a.rows();
    if (n > kMaxEigenDimension) {
        throw DimensionError("char_poly: n = " + std::to_string(n) + " exceeds " + std::to_string(kMaxEigenDimension));
    }
    std::vector<double> c(n + 1, 0.0);
    c[n] = 1.0;
    FaddeevResult out;
    Mat mk(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        mk = matmul(a, mk) + Mat::identity(n) * c[n - k + 1];
        c[n - k] = -trace(matmul(a, mk)) / static_cast<double>(k);
        out.adjugate_terms.push_back(mk);
    }
    out.char_poly = Polynomial(std::move(c));
    return out;
}

// Monic det(sI - A), ascending coefficients.
inline Polynomial char_poly(const Mat& a) { return faddeev_leverrier(a).char_poly; }

// Roots of the characteristic polynomial, conjugate pairs exact, sorted by (real, imag).
inline std::vector<Complex> eigenvalues(const Mat& a) {
    const Polynomial p = char_poly(a);
    if (p.degree() < 1) return {};
    return real_poly_roots(p);
}

} // namespace engcalc::ode
