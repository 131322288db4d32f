#pragma once

// Root finding, unconstrained and equality-constrained gradient descent,
// Lagrange stationary points, and the projectile / gymnast / diver scenarios.
//
// Multiplier sign convention: stationarity is grad f + J^T lambda = 0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <fmt/format.h>

#include "engcalc/diffnum.hpp"
#include "engcalc/error.hpp"
#include "engcalc/linalg.hpp"

namespace engcalc::opt {

using Objective = std::function<double(const Vec&)>;
using VectorField = std::function<Vec(const Vec&)>;

// ---- root finding ---------------------------------------------------------

struct Bracket {
    double a;
    double b;
};

namespace detail {

template <class F>
double sample(const F& f, double x) {
    const double y = f(x);
    if (std::isnan(y)) throw DomainError("bisection: f is NaN at " + std::to_string(x));
    return y;
}

} // namespace detail

// Halves [a, b] until its width is <= tol, keeping a sign change inside.
// Every bracket visited, including the initial one, is appended to `trail`.
template <class F>
double bisection(const F& f, double a, double b, double tol, int max_iters = 200,
                 std::vector<Bracket>* trail = nullptr) {
    if (!(tol > 0.0)) throw DomainError("bisection: tol must be positive");
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) throw DomainError("bisection: need finite a < b");
    double fa = detail::sample(f, a);
    const double fb = detail::sample(f, b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa < 0.0) == (fb < 0.0)) throw DomainError("bisection: f(a) and f(b) have the same sign");
    const int needed = std::max(0, static_cast<int>(std::ceil(std::log2((b - a) / tol))));
    if (max_iters < needed) {
        throw ConvergenceError(fmt::format("bisection: {} iterations needed, budget is {}", needed, max_iters));
    }
    if (trail) trail->push_back({a, b});
    while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break; // bracket is two adjacent doubles
        const double fm = detail::sample(f, mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
        if (trail) trail->push_back({a, b});
    }
    return 0.5 * (a + b);
}

struct NewtonResult {
    Vec x;
    int iterations = 0;
    double residual = 0.0; // ||F(x)||_inf at the returned x
};

// x <- x - J^{-1} F(x) with a central-difference Jacobian, until ||F(x)||_inf < tol.
inline NewtonResult newton_root(const VectorField& fn, const Vec& x0, double tol = 1e-12, int max_iters = 50,
                                const diff::DiffConfig& jac_cfg = diff::DiffConfig::first_order()) {
    if (!(tol > 0.0)) throw DomainError("newton_root: tol must be positive");
    if (!x0.all_finite()) throw DomainError("newton_root: non-finite start");
    NewtonResult out{x0, 0, 0.0};
    for (int iter = 0;; ++iter) {
        const Vec fx = fn(out.x);
        if (fx.size() != out.x.size()) throw DimensionError("newton_root: F must map R^n to R^n");
        if (!fx.all_finite()) throw DomainError("newton_root: F is non-finite at an iterate");
        out.residual = norm_inf(fx);
        out.iterations = iter;
        if (out.residual < tol) return out;
        if (iter == max_iters) break;
        const Mat jac = diff::jacobian(fn, out.x, jac_cfg);
        out.x -= lu_solve(jac, fx);
    }
    throw ConvergenceError(
        fmt::format("newton_root: ||F||_inf = {:.3e} after {} iterations", out.residual, max_iters));
}

// ---- descent --------------------------------------------------------------

enum class Backtracking { off, armijo };

struct DescentConfig {
    double alpha = 1e-2;
    double tol = 1e-8; // on the (projected) gradient, infinity norm
    int max_iters = 50000;
    Backtracking backtracking = Backtracking::off;
    double beta = 0.5;
    double c = 1e-4;

    void validate() const {
        if (!(alpha > 0.0)) throw DomainError("DescentConfig: alpha must be positive");
        if (!(tol > 0.0)) throw DomainError("DescentConfig: tol must be positive");
        if (max_iters < 1) throw DomainError("DescentConfig: max_iters must be >= 1");
        if (!(beta > 0.0 && beta < 1.0)) throw DomainError("DescentConfig: beta must lie in (0, 1)");
        if (!(c > 0.0 && c < 1.0)) throw DomainError("DescentConfig: c must lie in (0, 1)");
    }

    static DescentConfig armijo() {
        DescentConfig cfg;
        cfg.backtracking = Backtracking::armijo;
        return cfg;
    }
};

struct DescentResult {
    Vec x;
    double f_value = 0.0;
    int iterations = 0;
    bool converged = false;
};

namespace detail {

inline double checked_value(const Objective& f, const Vec& x, const char* op) {
    const double y = f(x);
    if (!std::isfinite(y)) throw DomainError(std::string(op) + ": objective is non-finite at an iterate");
    return y;
}

inline Vec checked_gradient(const Objective& f, const Vec& x, const char* op) {
    Vec g = diff::gradient(f, x);
    if (!g.all_finite()) throw DomainError(std::string(op) + ": gradient is non-finite at an iterate");
    return g;
}

// Step length along d. `slope` is grad f . d (negative for a descent direction).
inline double step_length(const Objective& f, const Vec& x, double fx, const Vec& d, double slope,
                          const DescentConfig& cfg) {
    double t = cfg.alpha;
    if (cfg.backtracking == Backtracking::off) return t;
    for (int k = 0; k < 200; ++k) {
        const double trial = f(x + t * d);
        if (std::isfinite(trial) && trial <= fx + cfg.c * t * slope) return t;
        t *= cfg.beta;
    }
    return t;
}

} // namespace detail

// Unconstrained steepest descent with a numeric gradient. Does not throw on
// budget exhaustion; check `converged`.
inline DescentResult gradient_descent(const Objective& f, const Vec& x0, const DescentConfig& cfg = {}) {
    cfg.validate();
    if (!x0.all_finite()) throw DomainError("gradient_descent: non-finite start");
    DescentResult out{x0, 0.0, 0, false};
    for (int iter = 0;; ++iter) {
        out.f_value = detail::checked_value(f, out.x, "gradient_descent");
        const Vec g = detail::checked_gradient(f, out.x, "gradient_descent");
        out.iterations = iter;
        if (norm_inf(g) < cfg.tol) {
            out.converged = true;
            return out;
        }
        if (iter == cfg.max_iters) return out;
        const Vec d = -g;
        const double t = detail::step_length(f, out.x, out.f_value, d, -dot(g, g), cfg);
        out.x += t * d;
    }
}

struct ConstrainedProblem {
    Objective f;
    VectorField h;
    std::size_t n = 0;
    std::size_t m = 0;

    void validate() const {
        if (!f || !h) throw DomainError("ConstrainedProblem: objective and constraints are required");
        if (!(m < n)) throw DimensionError("ConstrainedProblem: need m < n");
    }
};

struct ConstrainedResult {
    Vec x;
    Vec lambda;
    int iterations = 0;
    bool converged = false;
    double f_value = 0.0;
    double stationarity = 0.0; // ||grad f + J^T lambda||_inf
    double feasibility = 0.0;  // ||h(x)||_inf
    std::vector<double> objective_history;
    std::vector<double> feasibility_history; // after each restoration step
};

inline constexpr double kFeasibilityTol = 1e-8;
inline constexpr double kRestoreTol = 1e-13;
inline constexpr int kMaxRestoreSteps = 6;

namespace detail {

inline Vec checked_constraints(const ConstrainedProblem& prob, const Vec& x) {
    Vec hx = prob.h(x);
    if (hx.size() != prob.m) {
        throw DimensionError(fmt::format("constraints returned {} values, expected {}", hx.size(), prob.m));
    }
    if (!hx.all_finite()) throw DomainError("constraints are non-finite at an iterate");
    return hx;
}

struct Linearization {
    Mat jac;
    LuDecomposition gram; // J J^T
};

inline Linearization linearize(const ConstrainedProblem& prob, const Vec& x) {
    Mat jac = diff::jacobian(prob.h, x);
    LuDecomposition gram(matmul(jac, transpose(jac)));
    return {std::move(jac), std::move(gram)};
}

// Minimum-norm Newton steps x -= J^T (J J^T)^{-1} h, repeated while ||h||_inf
// exceeds kRestoreTol and keeps shrinking. A single step leaves a residual of
// order |step|^2, which would let ||h|| creep upward from one iterate to the next.
inline void restore(const ConstrainedProblem& prob, Vec& x) {
    Vec hx = checked_constraints(prob, x);
    for (int k = 0; k < kMaxRestoreSteps && norm_inf(hx) > kRestoreTol; ++k) {
        const auto lin = linearize(prob, x);
        const Vec trial = x - transpose(lin.jac) * lin.gram.solve(hx);
        const Vec h_trial = checked_constraints(prob, trial);
        if (k > 0 && !(norm_inf(h_trial) < norm_inf(hx))) break;
        x = trial;
        hx = h_trial;
    }
}

} // namespace detail

// Each iteration restores feasibility with minimum-norm Newton steps on h,
// then moves along d = -(I - J^T (J J^T)^{-1} J) grad f. Converged when
// ||d||_inf < tol and ||h||_inf < 1e-8; the returned x is the restored point
// at which that test passed.
inline ConstrainedResult constrained_descent(const ConstrainedProblem& prob, const Vec& x0,
                                             const DescentConfig& cfg = {}) {
    prob.validate();
    cfg.validate();
    if (x0.size() != prob.n) throw DimensionError("constrained_descent: x0 has the wrong dimension");
    if (!x0.all_finite()) throw DomainError("constrained_descent: non-finite start");

    ConstrainedResult out;
    out.x = x0;
    for (int iter = 0;; ++iter) {
        detail::restore(prob, out.x);
        const Vec hx = detail::checked_constraints(prob, out.x);
        const auto lin = detail::linearize(prob, out.x);
        out.f_value = detail::checked_value(prob.f, out.x, "constrained_descent");
        const Vec g = detail::checked_gradient(prob.f, out.x, "constrained_descent");
        const Mat jt = transpose(lin.jac);
        out.lambda = -lin.gram.solve(lin.jac * g);
        const Vec d = -(g + jt * out.lambda);
        out.iterations = iter;
        out.stationarity = norm_inf(d);
        out.feasibility = norm_inf(hx);
        out.objective_history.push_back(out.f_value);
        out.feasibility_history.push_back(out.feasibility);
        if (out.stationarity < cfg.tol && out.feasibility < kFeasibilityTol) {
            out.converged = true;
            return out;
        }
        if (iter == cfg.max_iters) break;
        const double t = detail::step_length(prob.f, out.x, out.f_value, d, -dot(d, d), cfg);
        out.x += t * d;
    }
    throw ConvergenceError(fmt::format("constrained_descent: budget of {} iterations exhausted; "
                                       "||d||_inf = {:.3e}, ||h||_inf = {:.3e}",
                                       cfg.max_iters, out.stationarity, out.feasibility));
}

struct LagrangeResult {
    Vec x;
    Vec lambda;
    int iterations = 0;
};

inline constexpr double kLagrangeTol = 1e-9;

// Newton on [grad f + J^T lambda; h] = 0. May converge to any stationary point
// of the Lagrangian, including a constrained maximum.
inline LagrangeResult lagrange_solve(const ConstrainedProblem& prob, const Vec& x0, const Vec& lambda0,
                                     double tol = kLagrangeTol, int max_iters = 100) {
    prob.validate();
    if (x0.size() != prob.n || lambda0.size() != prob.m) throw DimensionError("lagrange_solve: bad start dimensions");
    const std::size_t n = prob.n;
    const std::size_t m = prob.m;
    const VectorField stationarity = [&](const Vec& z) {
        const Vec x = slice(z, 0, n);
        const Vec lambda = slice(z, n, m);
        const Vec g = diff::gradient(prob.f, x);
        const Mat jac = diff::jacobian(prob.h, x);
        return concat(g + transpose(jac) * lambda, detail::checked_constraints(prob, x));
    };
    // The outer Jacobian differentiates a finite-difference gradient, so it
    // uses a larger step than the inner one to keep rounding noise down.
    const NewtonResult r = newton_root(stationarity, concat(x0, lambda0), tol, max_iters, {1e-4, true});
    return {slice(r.x, 0, n), slice(r.x, n, m), r.iterations};
}

// ---- scenarios ------------------------------------------------------------

inline constexpr double kGravity = 9.81;

// Planar point launched from p0 with velocity v under gravity g, at time t.
inline Vec ballistic(const Vec& p0, const Vec& v, double g, double t) {
    return {p0[0] + v[0] * t, p0[1] + v[1] * t - 0.5 * g * t * t};
}

struct FreeThrowParams {
    Vec p0{0.0, 2.0};
    Vec p_h{4.6, 3.05};
    double g = kGravity;

    void validate() const {
        if (p0.size() != 2 || p_h.size() != 2) throw DimensionError("FreeThrowParams: points must be 2-D");
        if (!(p_h[0] > p0[0])) throw DomainError("FreeThrowParams: hoop must lie ahead of the release point");
        if (!(g > 0.0)) throw DomainError("FreeThrowParams: g must be positive");
    }
};

// Release velocity reaching the hoop in exactly tf seconds.
inline Vec freethrow_linear(const FreeThrowParams& params, double tf) {
    if (params.p0.size() != 2 || params.p_h.size() != 2) throw DimensionError("freethrow: points must be 2-D");
    if (!(tf > 0.0)) throw DomainError("freethrow_linear: tf must be positive");
    const Mat a{{tf, 0.0}, {0.0, tf}};
    const Vec rhs{params.p_h[0] - params.p0[0], params.p_h[1] - params.p0[1] + 0.5 * params.g * tf * tf};
    return lu_solve(a, rhs);
}

struct FreeMode {};
struct FixedTf {
    double tf;
};
struct FixedSpeed {
    double speed;
};
using FreeThrowMode = std::variant<FreeMode, FixedTf, FixedSpeed>;

struct FreeThrowResult {
    Vec v;
    double tf = 0.0;
    double miss_distance = 0.0;
    int iterations = 0;
    Vec lambda;                 // empty in free mode
    double constraint_residual = 0.0;
    std::vector<double> objective_history;
    std::vector<double> feasibility_history;
};

inline constexpr double kMaxMiss = 1e-3;

// Smallest launch speed whose ballistic arc passes through the hoop:
// v^2 = g (dy + sqrt(dx^2 + dy^2)).
inline double freethrow_min_speed(const FreeThrowParams& params) {
    const double dx = params.p_h[0] - params.p0[0];
    const double dy = params.p_h[1] - params.p0[1];
    return std::sqrt(params.g * (dy + std::hypot(dx, dy)));
}

// Decision variables z = (vx, vy, tf); objective is the squared miss at tf.
// Default start: the exact linear solution for tf = 1 (or the fixed tf).
inline FreeThrowResult freethrow_opt(const FreeThrowParams& params, const FreeThrowMode& mode,
                                     std::optional<Vec> x0 = std::nullopt,
                                     const DescentConfig& cfg = DescentConfig::armijo()) {
    params.validate();
    if (const auto* ft = std::get_if<FixedTf>(&mode); ft && !(ft->tf > 0.0)) {
        throw DomainError("freethrow_opt: fixed tf must be positive");
    }
    if (const auto* fs = std::get_if<FixedSpeed>(&mode); fs && !(fs->speed > 0.0)) {
        throw DomainError("freethrow_opt: fixed speed must be positive");
    }
    if (const auto* fs = std::get_if<FixedSpeed>(&mode); fs && fs->speed < freethrow_min_speed(params)) {
        throw DomainError(fmt::format("freethrow_opt: speed {:.4g} m/s is below the minimum {:.4g} m/s needed to reach "
                                      "the hoop",
                                      fs->speed, freethrow_min_speed(params)));
    }
    const Objective miss2 = [params](const Vec& z) {
        const Vec p = ballistic(params.p0, {z[0], z[1]}, params.g, z[2]);
        const double dx = p[0] - params.p_h[0];
        const double dy = p[1] - params.p_h[1];
        return dx * dx + dy * dy;
    };
    Vec start;
    if (x0) {
        if (x0->size() != 3) throw DimensionError("freethrow_opt: start must be (vx, vy, tf)");
        start = *x0;
    } else {
        const double tf0 = std::holds_alternative<FixedTf>(mode) ? std::get<FixedTf>(mode).tf : 1.0;
        const Vec v = freethrow_linear(params, tf0);
        start = {v[0], v[1], tf0};
    }

    FreeThrowResult out;
    Vec z;
    if (std::holds_alternative<FreeMode>(mode)) {
        const DescentResult r = gradient_descent(miss2, start, cfg);
        if (!r.converged) throw ConvergenceError("freethrow_opt: gradient descent did not converge");
        z = r.x;
        out.iterations = r.iterations;
    } else {
        ConstrainedProblem prob{miss2, {}, 3, 1};
        if (const auto* ft = std::get_if<FixedTf>(&mode)) {
            prob.h = [tf = ft->tf](const Vec& x) { return Vec{x[2] - tf}; };
        } else {
            const double s = std::get<FixedSpeed>(mode).speed;
            prob.h = [s](const Vec& x) { return Vec{x[0] * x[0] + x[1] * x[1] - s * s}; };
        }
        const ConstrainedResult r = constrained_descent(prob, start, cfg);
        z = r.x;
        out.iterations = r.iterations;
        out.lambda = r.lambda;
        out.constraint_residual = r.feasibility;
        out.objective_history = r.objective_history;
        out.feasibility_history = r.feasibility_history;
    }
    out.v = {z[0], z[1]};
    out.tf = z[2];
    out.miss_distance = std::sqrt(miss2(z));
    if (out.miss_distance > kMaxMiss) {
        throw DomainError(fmt::format("freethrow_opt: best trajectory misses the hoop by {:.4g} m "
                                      "(speed too low to reach it?)",
                                      out.miss_distance));
    }
    return out;
}

// Rigid bar of length 2l with end masses m1, m2; the CoM is the bar center.
struct GymnastModel {
    double l = 0.9;
    double m1 = 30.0;
    double m2 = 30.0;
    Vec p0{0.0, 3.0};
    Vec p_land{0.0, 0.0};
    double theta0 = 0.0;
    double theta_land = 0.0;
    double g = kGravity;

    void validate() const {
        if (!(l > 0.0 && m1 > 0.0 && m2 > 0.0)) throw DomainError("GymnastModel: masses and l must be positive");
        if (p0.size() != 2 || p_land.size() != 2) throw DimensionError("GymnastModel: points must be 2-D");
        if (!(g > 0.0)) throw DomainError("GymnastModel: g must be positive");
    }
    [[nodiscard]] double mass() const { return m1 + m2; }
    [[nodiscard]] double inertia() const { return (m1 + m2) * l * l; }
};

struct GymnastResult {
    Vec v0;
    double omega = 0.0;
    double tf = 0.0;
    double objective = 0.0;
    Vec residuals; // landing x, landing y, landing angle
    int iterations = 0;
    std::vector<double> objective_history;
    std::vector<double> feasibility_history;
};

// z = (v0x, v0y, omega, tf). Objective: translational plus rotational kinetic
// energy at launch, 1/2 (m1 + m2) |v0|^2 + 1/2 I omega^2.
inline ConstrainedProblem gymnast_problem(const GymnastModel& model) {
    model.validate();
    ConstrainedProblem prob;
    prob.n = 4;
    prob.m = 3;
    prob.f = [model](const Vec& z) {
        return 0.5 * model.mass() * (z[0] * z[0] + z[1] * z[1]) + 0.5 * model.inertia() * z[2] * z[2];
    };
    prob.h = [model](const Vec& z) {
        const Vec p = ballistic(model.p0, {z[0], z[1]}, model.g, z[3]);
        return Vec{p[0] - model.p_land[0], p[1] - model.p_land[1], model.theta0 + z[2] * z[3] - model.theta_land};
    };
    return prob;
}

inline GymnastResult gymnast_optimize(const GymnastModel& model, const DescentConfig& cfg = DescentConfig::armijo(),
                                      double tf_guess = 1.0) {
    const ConstrainedProblem prob = gymnast_problem(model);
    const Vec v = freethrow_linear({model.p0, model.p_land, model.g}, tf_guess);
    const Vec start{v[0], v[1], (model.theta_land - model.theta0) / tf_guess, tf_guess};
    const ConstrainedResult r = constrained_descent(prob, start, cfg);
    return {Vec{r.x[0], r.x[1]}, r.x[2], r.x[3], r.f_value, prob.h(r.x), r.iterations,
            r.objective_history, r.feasibility_history};
}

// Two-shape diver: open inertia outside the tuck window [t1, t2], tuck inertia
// inside. With `rigid` set the window is empty and only (v0x, v0y, L) are free.
struct DiverModel {
    double platform_height = 10.0;
    double I_open = 15.0;
    double I_tuck = 5.0;
    int k = 2;
    double d_min = 1.0;
    double g = kGravity;
    double epsilon = 1e-3;
    bool rigid = false;

    void validate() const {
        if (!(I_tuck > 0.0 && I_tuck < I_open)) throw DomainError("DiverModel: need 0 < I_tuck < I_open");
        if (k < 1) throw DomainError("DiverModel: k must be >= 1");
        if (!(platform_height > 0.0 && g > 0.0)) throw DomainError("DiverModel: height and g must be positive");
        if (!(epsilon >= 0.0)) throw DomainError("DiverModel: epsilon must be non-negative");
    }
};

// Positive root of h + v0y t - g t^2 / 2 = 0.
inline double diver_entry_time(const DiverModel& model, double v0y) {
    return (v0y + std::sqrt(v0y * v0y + 2.0 * model.g * model.platform_height)) / model.g;
}

// Rotation angle at entry. The window is clamped to 0 <= t1 <= t2 <= te.
inline double diver_entry_angle(const DiverModel& model, double v0y, double L, double t1, double t2) {
    const double te = diver_entry_time(model, v0y);
    const double a = std::clamp(t1, 0.0, te);
    const double b = std::clamp(t2, a, te);
    const double tuck = b - a;
    return L / model.I_open * (te - tuck) + L / model.I_tuck * tuck;
}

struct DiverResult {
    Vec v0;
    double L = 0.0;
    double t_tuck_start = 0.0;
    double t_tuck_end = 0.0;
    double t_entry = 0.0;
    double entry_angle_residual = 0.0;
    double clearance_residual = 0.0;
    double objective = 0.0;
    int iterations = 0;
    std::vector<double> objective_history;
    std::vector<double> feasibility_history;
};

// The regularizer epsilon leaves little curvature along L, so the diver's
// default line search backtracks from a unit step instead of 1e-2.
inline DescentConfig diver_config() {
    DescentConfig cfg = DescentConfig::armijo();
    cfg.alpha = 1.0;
    return cfg;
}

inline DiverResult diver_optimize(const DiverModel& model, const DescentConfig& cfg = diver_config()) {
    model.validate();
    const double target = model.k * std::numbers::pi;
    const auto window = [&model](const Vec& z) -> std::pair<double, double> {
        if (model.rigid) return {0.0, 0.0};
        return {z[3], z[4]};
    };
    ConstrainedProblem prob;
    prob.n = model.rigid ? 3 : 5;
    prob.m = 2;
    prob.f = [model](const Vec& z) { return 0.5 * (z[0] * z[0] + z[1] * z[1]) + 0.5 * model.epsilon * z[2] * z[2]; };
    prob.h = [model, target, window](const Vec& z) {
        const auto [t1, t2] = window(z);
        const double te = diver_entry_time(model, z[1]);
        return Vec{diver_entry_angle(model, z[1], z[2], t1, t2) - target, z[0] * te - model.d_min};
    };

    // Start: zero vertical launch speed, a tuck window over the middle half of
    // the flight and the L that completes the rotation with that window.
    const double te0 = diver_entry_time(model, 0.0);
    const double tuck0 = model.rigid ? 0.0 : 0.5 * te0;
    const double L0 = target / ((te0 - tuck0) / model.I_open + tuck0 / model.I_tuck);
    Vec start{model.d_min / te0, 0.0, L0};
    if (!model.rigid) start = concat(start, Vec{0.25 * te0, 0.75 * te0});

    const ConstrainedResult r = constrained_descent(prob, start, cfg);
    const auto [t1, t2] = window(r.x);
    DiverResult out;
    out.v0 = {r.x[0], r.x[1]};
    out.L = r.x[2];
    out.t_entry = diver_entry_time(model, r.x[1]);
    out.t_tuck_start = std::clamp(t1, 0.0, out.t_entry);
    out.t_tuck_end = std::clamp(t2, out.t_tuck_start, out.t_entry);
    const Vec hx = prob.h(r.x);
    out.entry_angle_residual = hx[0];
    out.clearance_residual = hx[1];
    out.objective = r.f_value;
    out.iterations = r.iterations;
    out.objective_history = r.objective_history;
    out.feasibility_history = r.feasibility_history;
    return out;
}

} // namespace engcalc::opt
