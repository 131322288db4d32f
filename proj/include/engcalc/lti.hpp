#pragma once

// Transfer functions, state-space models and PD feedback design.
//
// Conventions: polynomials are ascending in s; no pole-zero cancellation is
// ever performed; controllers are ideal PD (kd s + kp) and only closed loops
// are simulated.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "engcalc/diffnum.hpp"
#include "engcalc/error.hpp"
#include "engcalc/linalg.hpp"
#include "engcalc/mech.hpp"
#include "engcalc/odesolve.hpp"
#include "engcalc/poly.hpp"
#include "engcalc/signal.hpp"

namespace engcalc::lti {

struct TransferFunction {
    Polynomial num;
    Polynomial den;

    TransferFunction(Polynomial n, Polynomial d) : num(std::move(n)), den(std::move(d)) {
        if (den.is_zero()) throw DomainError("TransferFunction: zero denominator");
    }

    [[nodiscard]] bool proper() const { return num.degree() <= den.degree(); }
    [[nodiscard]] Complex operator()(Complex s) const { return num(s) / den(s); }
};

// `[num coeffs] / [den coeffs]`, ascending, e.g. `[2,3] / [2,3,1]`.
inline std::string to_string(const TransferFunction& tf) {
    return engcalc::to_string(tf.num) + " / " + engcalc::to_string(tf.den);
}

struct StateSpace {
    Mat A; // n x n
    Mat B; // n x m
    Mat C; // p x n
    Mat D; // p x m

    StateSpace(Mat a, Mat b, Mat c, Mat d) : A(std::move(a)), B(std::move(b)), C(std::move(c)), D(std::move(d)) {
        const std::size_t n = A.rows();
        if (!A.square() || B.rows() != n || C.cols() != n || D.rows() != C.rows() || D.cols() != B.cols()) {
            throw DimensionError("StateSpace: inconsistent dimensions");
        }
    }

    [[nodiscard]] std::size_t states() const noexcept { return A.rows(); }
    [[nodiscard]] std::size_t inputs() const noexcept { return B.cols(); }
    [[nodiscard]] std::size_t outputs() const noexcept { return C.rows(); }
};

struct StepMetrics {
    double rise_time;     // 10% -> 90% of final value, s (inf if never reached)
    double overshoot;     // (peak - final) / |final|, clamped at 0
    double settling_time; // last exit from the +-2% band, s
    double steady_state;
};

struct PdGains {
    double kp;
    double kd;
};

inline std::vector<Complex> poles(const TransferFunction& tf) {
    if (tf.den.degree() < 1) return {};
    return real_poly_roots(tf.den);
}

inline std::vector<Complex> zeros(const TransferFunction& tf) {
    if (tf.num.degree() < 1) return {};
    return real_poly_roots(tf.num);
}

inline TransferFunction pd_tf(const PdGains& g) { return {Polynomial{g.kp, g.kd}, Polynomial{1.0}}; }

inline TransferFunction series(const TransferFunction& a, const TransferFunction& b) {
    return {a.num * b.num, a.den * b.den};
}

// precomp * P C / (1 + P C) with polynomial arithmetic; the result must be proper.
inline TransferFunction unity_feedback(const TransferFunction& plant, const TransferFunction& controller,
                                       double precomp = 1.0) {
    if (!plant.proper()) throw DomainError("unity_feedback: plant is improper: " + to_string(plant));
    const Polynomial open_num = plant.num * controller.num;
    const Polynomial open_den = plant.den * controller.den;
    const Polynomial closed_den = open_den + open_num;
    if (closed_den.is_zero()) throw DomainError("unity_feedback: closed-loop denominator vanishes");
    TransferFunction closed(open_num.scaled(precomp), closed_den);
    if (!closed.proper()) {
        throw DomainError("unity_feedback: closed loop is improper (numerator degree " +
                          std::to_string(closed.num.degree()) + " > denominator degree " +
                          std::to_string(closed.den.degree()) + ")");
    }
    return closed;
}

inline double dc_gain(const TransferFunction& tf) {
    const double d0 = tf.den[0];
    if (d0 == 0.0) throw DomainError("dc_gain: pole at the origin");
    return tf.num[0] / d0;
}

// Static gain that gives the loop unit DC gain.
inline double precompensator(const TransferFunction& tf) {
    const double k = dc_gain(tf);
    if (k == 0.0) throw DomainError("precompensator: zero at the origin (dc gain 0)");
    return 1.0 / k;
}

// Numerator and denominator of output `output` / input `input`:
// den = det(sI - A), num = C adj(sI - A) B + D den.
inline TransferFunction ss_to_tf(const StateSpace& ss, std::size_t input, std::size_t output) {
    if (input >= ss.inputs() || output >= ss.outputs()) throw DimensionError("ss_to_tf: input/output index out of range");
    const std::size_t n = ss.states();
    const auto fl = ode::faddeev_leverrier(ss.A);
    std::vector<double> num(n + 1, 0.0);
    for (std::size_t k = 1; k <= n; ++k) {
        const Mat& mk = fl.adjugate_terms[k - 1];
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) v += ss.C(output, i) * mk(i, j) * ss.B(j, input);
        num[n - k] = v;
    }
    const Polynomial resolvent(std::move(num));
    return {resolvent + fl.char_poly.scaled(ss.D(output, input)), fl.char_poly};
}

// Controllable canonical form of a proper SISO transfer function.
inline StateSpace tf_to_ss(const TransferFunction& tf) {
    if (!tf.proper()) throw DomainError("tf_to_ss: transfer function is improper");
    const double lead = tf.den.leading();
    const Polynomial den = tf.den.scaled(1.0 / lead);
    const Polynomial num = tf.num.scaled(1.0 / lead);
    const auto n = static_cast<std::size_t>(den.degree());
    const double feedthrough = num[n];
    Mat a(n, n);
    Mat b(n, 1);
    Mat c(1, n);
    for (std::size_t i = 0; i + 1 < n; ++i) a(i, i + 1) = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        a(n - 1, j) = -den[j];
        c(0, j) = num[j] - feedthrough * den[j];
    }
    if (n > 0) b(n - 1, 0) = 1.0;
    return {a, b, c, Mat{{feedthrough}}};
}

inline constexpr double kBlowUp = 1e9;

// Unit-step response from rest, via tf_to_ss and RK4. Output channel "y".
inline SampledSignal step_response(const TransferFunction& tf, double T, double dt) {
    if (!(T > 0.0)) throw DomainError("step_response: T must be positive");
    const StateSpace ss = tf_to_ss(tf);
    const std::size_t n = ss.states();
    const Vec u{1.0};
    const ode::Rhs rhs = [&](double, const Vec& x) { return ss.A * x + ss.B * u; };
    const auto grid = ode::detail::time_grid(0.0, T, dt);
    SampledSignal out(1, {"y"});
    Vec x(n);
    const auto output = [&](const Vec& state) { return (ss.C * state)[0] + ss.D(0, 0); };
    out.push_back(grid[0], Vec{output(x)});
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        x = ode::rk4_step(rhs, grid[k], x, grid[k + 1] - grid[k]);
        const double y = output(x);
        if (!std::isfinite(y) || std::abs(y) > kBlowUp) {
            throw DomainError("step_response: response blew up at t = " + std::to_string(grid[k + 1]));
        }
        out.push_back(grid[k + 1], Vec{y});
    }
    return out;
}

namespace detail {

// First time the response crosses `level` (moving toward the final value), linearly interpolated.
inline double first_crossing(const std::vector<double>& t, const std::vector<double>& y, double level, double sign) {
    for (std::size_t k = 0; k < y.size(); ++k) {
        if (sign * y[k] >= sign * level) {
            if (k == 0) return t[0];
            const double frac = (level - y[k - 1]) / (y[k] - y[k - 1]);
            return t[k - 1] + frac * (t[k] - t[k - 1]);
        }
    }
    return std::numeric_limits<double>::infinity();
}

} // namespace detail

// Step metrics of channel 0 against `final_hint`, or the mean of the last 5% of samples.
inline StepMetrics response_metrics(const SampledSignal& sig, std::optional<double> final_hint = std::nullopt) {
    sig.validate();
    const auto& t = sig.times();
    const std::vector<double> y = sig.channel(0);
    double final_value = 0.0;
    if (final_hint) {
        final_value = *final_hint;
    } else {
        const std::size_t tail = std::max<std::size_t>(1, y.size() / 20);
        for (std::size_t k = y.size() - tail; k < y.size(); ++k) final_value += y[k];
        final_value /= static_cast<double>(tail);
    }
    StepMetrics m{};
    m.steady_state = final_value;
    if (final_value == 0.0) {
        m.rise_time = 0.0;
        m.overshoot = 0.0;
    } else {
        const double sign = final_value > 0.0 ? 1.0 : -1.0;
        const double t10 = detail::first_crossing(t, y, 0.1 * final_value, sign);
        const double t90 = detail::first_crossing(t, y, 0.9 * final_value, sign);
        m.rise_time = t90 - t10;
        double peak = -std::numeric_limits<double>::infinity();
        for (double v : y) peak = std::max(peak, sign * v);
        m.overshoot = std::max(0.0, (peak - std::abs(final_value)) / std::abs(final_value));
    }
    const double band = 0.02 * std::abs(final_value);
    m.settling_time = 0.0;
    for (std::size_t k = y.size(); k-- > 0;) {
        if (std::abs(y[k] - final_value) > band) {
            m.settling_time = k + 1 < y.size() ? t[k + 1] : t[k];
            break;
        }
    }
    return m;
}

// PD gains placing the closed-loop poles of b / (s^2 + a1 s + a0) at
// s^2 + 2 zeta wn s + wn^2.
inline PdGains pd_pole_placement(const TransferFunction& plant, double wn, double zeta) {
    if (!(wn > 0.0) || !(zeta > 0.0)) throw DomainError("pd_pole_placement: need wn > 0 and zeta > 0");
    if (plant.den.degree() != 2 || plant.num.degree() != 0) {
        throw DomainError("pd_pole_placement: plant must be b / (s^2 + a1 s + a0), got " + to_string(plant));
    }
    const double lead = plant.den.leading();
    const double b = plant.num[0] / lead;
    const double a1 = plant.den[1] / lead;
    const double a0 = plant.den[0] / lead;
    return {(wn * wn - a0) / b, (2.0 * zeta * wn - a1) / b};
}

// Linearization about an equilibrium (q_eq, 0, u_eq): x = (q, qd),
// A and B are Jacobians of the first-order dynamics, C selects q, D = 0.
inline StateSpace linearize(const mech::MechanicalModel& model, const Vec& q_eq, const Vec& u_eq) {
    constexpr double kEquilibriumTolerance = 1e-6;
    const std::size_t n = model.n_dof;
    const std::size_t m = model.n_inputs();
    const Vec zero(n);
    const Vec residual = mech::forward_dynamics(model, q_eq, zero, u_eq);
    if (norm_inf(residual) >= kEquilibriumTolerance) {
        throw DomainError("linearize: not an equilibrium (|qdd| = " + std::to_string(norm_inf(residual)) + ")");
    }
    const auto state_rhs = [&](const Vec& x) {
        const Vec q = slice(x, 0, n);
        const Vec qd = slice(x, n, n);
        return concat(qd, mech::forward_dynamics(model, q, qd, u_eq));
    };
    const auto input_rhs = [&](const Vec& u) { return concat(zero, mech::forward_dynamics(model, q_eq, zero, u)); };
    const Mat a = diff::jacobian(state_rhs, concat(q_eq, zero));
    Mat b = m > 0 ? diff::jacobian(input_rhs, u_eq) : Mat(2 * n, 0);
    Mat c(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) c(i, i) = 1.0;
    return {a, b, c, Mat(n, m)};
}

// Restriction to the states in `keep` (with outputs restricted to `outputs`).
// Only valid when the kept states are dynamically closed: rows of A for kept
// states must not depend on dropped states, and kept outputs must not read
// dropped states. This is an exact structural decomposition, not a cancellation.
inline StateSpace subsystem(const StateSpace& ss, const std::vector<std::size_t>& keep,
                            const std::vector<std::size_t>& outputs, double tol = 1e-9) {
    const std::size_t n = ss.states();
    std::vector<bool> kept(n, false);
    for (std::size_t i : keep) {
        if (i >= n) throw DimensionError("subsystem: state index out of range");
        kept[i] = true;
    }
    for (std::size_t i : keep)
        for (std::size_t j = 0; j < n; ++j)
            if (!kept[j] && std::abs(ss.A(i, j)) > tol * std::max(1.0, max_abs(ss.A))) {
                throw DomainError("subsystem: kept state " + std::to_string(i) + " depends on dropped state " +
                                  std::to_string(j));
            }
    for (std::size_t o : outputs) {
        if (o >= ss.outputs()) throw DimensionError("subsystem: output index out of range");
        for (std::size_t j = 0; j < n; ++j)
            if (!kept[j] && ss.C(o, j) != 0.0) throw DomainError("subsystem: output reads a dropped state");
    }
    const std::size_t k = keep.size();
    Mat a(k, k);
    Mat b(k, ss.inputs());
    Mat c(outputs.size(), k);
    Mat d(outputs.size(), ss.inputs());
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t s = 0; s < k; ++s) a(r, s) = ss.A(keep[r], keep[s]);
        for (std::size_t u = 0; u < ss.inputs(); ++u) b(r, u) = ss.B(keep[r], u);
    }
    for (std::size_t r = 0; r < outputs.size(); ++r) {
        for (std::size_t s = 0; s < k; ++s) c(r, s) = ss.C(outputs[r], keep[s]);
        for (std::size_t u = 0; u < ss.inputs(); ++u) d(r, u) = ss.D(outputs[r], u);
    }
    return {a, b, c, d};
}

// Lean-angle PD design for a zoo model balanced upright: linearize at the
// upright equilibrium, keep the (lean, lean rate) states, which are closed
// under the linear dynamics, and place the poles of that second-order plant.
struct LeanDesign {
    Vec q_eq;
    std::size_t lean_index = 0;
    StateSpace linear;
    TransferFunction plant;
    PdGains gains;
    TransferFunction closed_loop;
    double precomp = 1.0;
};

// Upright equilibrium and lean coordinate for the balancing models.
inline std::pair<Vec, std::size_t> upright_equilibrium(const mech::MechanicalModel& model) {
    if (model.name == "pendulum") return {Vec{std::numbers::pi}, 0};
    if (model.name == "segway" || model.name == "ballbot") return {Vec(2), 1};
    throw DomainError("no upright equilibrium defined for model '" + model.name + "'");
}

inline LeanDesign design_lean_pd(const mech::MechanicalModel& model, double wn, double zeta) {
    if (model.n_inputs() != 1) throw DomainError("design_lean_pd: model must have exactly one input");
    auto [q_eq, lean] = upright_equilibrium(model);
    const std::size_t n = model.n_dof;
    StateSpace linear = linearize(model, q_eq, Vec(1));
    const StateSpace reduced = subsystem(linear, {lean, n + lean}, {lean});
    TransferFunction plant = ss_to_tf(reduced, 0, 0);
    const PdGains gains = pd_pole_placement(plant, wn, zeta);
    const TransferFunction loop = unity_feedback(plant, pd_tf(gains));
    const double pre = precompensator(loop);
    TransferFunction closed = unity_feedback(plant, pd_tf(gains), pre);
    return {std::move(q_eq), lean, std::move(linear), std::move(plant), gains, std::move(closed), pre};
}

// u = kp (precomp r - e) - kd de/dt with e the lean deviation from upright.
inline mech::Controller lean_pd_controller(const LeanDesign& d, double reference = 0.0) {
    return [d, reference](double, const Vec& q, const Vec& qd) {
        const double e = q[d.lean_index] - d.q_eq[d.lean_index];
        return Vec{d.gains.kp * (d.precomp * reference - e) - d.gains.kd * qd[d.lean_index]};
    };
}

} // namespace engcalc::lti
