#pragma once

// IMU dead reckoning by trapezoidal integration, with an optional two-gain
// velocity/bias correction applied whenever a velocity measurement arrives.
//
// Correction at a measurement sample (innovation e = v_meas - v_hat):
//   v_hat <- v_hat + l1 * e
//   b_hat <- b_hat - l2 * e
// Between measurements the bias-compensated acceleration a - b_hat is
// integrated into v_hat, and v_hat (after any correction) into p_hat.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "engcalc/error.hpp"
#include "engcalc/linalg.hpp"
#include "engcalc/odesolve.hpp"
#include "engcalc/quad.hpp"
#include "engcalc/signal.hpp"

namespace engcalc::odo {

// Acceleration samples, one channel per axis (1 to 3 axes).
using ImuTrace = SampledSignal;

struct VelMeasurement {
    double t;
    Vec v;
};

struct FilterGains {
    double l1 = 0.0; // velocity correction, dimensionless, in [0, 2]
    double l2 = 0.0; // bias correction, 1/s, >= 0

    void validate() const {
        if (!(l1 >= 0.0 && l1 <= 2.0)) throw DomainError("FilterGains: l1 must lie in [0, 2]");
        if (!(l2 >= 0.0)) throw DomainError("FilterGains: l2 must be non-negative");
    }
};

inline std::vector<std::string> axis_names(const std::string& prefix, std::size_t d) {
    static constexpr const char* kAxes[] = {"x", "y", "z"};
    if (d > std::size(kAxes)) throw DimensionError("at most 3 axes are supported");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < d; ++i) names.push_back(prefix + kAxes[i]);
    return names;
}

namespace detail {

inline void check_trace(const ImuTrace& trace) {
    trace.validate();
    if (trace.dim() < 1 || trace.dim() > 3) throw DimensionError("imu trace must have 1 to 3 axes");
}

inline void check_dim(const Vec& v, std::size_t d, const char* what) {
    if (v.size() != d) {
        throw DimensionError(std::string(what) + " has " + std::to_string(v.size()) + " entries, trace has " +
                             std::to_string(d) + " axes");
    }
}

} // namespace detail

struct DeadReckoning {
    SampledSignal v;
    SampledSignal p;
};

// v = v0 + cumulative integral of a; p = p0 + cumulative integral of v; per axis.
inline DeadReckoning dead_reckon(const ImuTrace& trace, const Vec& v0, const Vec& p0) {
    detail::check_trace(trace);
    const std::size_t d = trace.dim();
    detail::check_dim(v0, d, "v0");
    detail::check_dim(p0, d, "p0");

    std::vector<std::vector<double>> vel(d);
    for (std::size_t c = 0; c < d; ++c) {
        const SampledSignal dv = quad::cumulative_trapezoid(trace, c);
        vel[c] = dv.channel(0);
        for (double& x : vel[c]) x += v0[c];
    }
    SampledSignal v(d, axis_names("v", d));
    for (std::size_t k = 0; k < trace.size(); ++k) {
        Vec row(d);
        for (std::size_t c = 0; c < d; ++c) row[c] = vel[c][k];
        v.push_back(trace.time(k), row);
    }
    SampledSignal p(d, axis_names("p", d));
    std::vector<std::vector<double>> pos(d);
    for (std::size_t c = 0; c < d; ++c) pos[c] = quad::cumulative_trapezoid(v, c).channel(0);
    for (std::size_t k = 0; k < trace.size(); ++k) {
        Vec row(d);
        for (std::size_t c = 0; c < d; ++c) row[c] = p0[c] + pos[c][k];
        p.push_back(trace.time(k), row);
    }
    return {std::move(v), std::move(p)};
}

struct CorrectedOdometry {
    SampledSignal v;
    SampledSignal p;
    SampledSignal bias_history;
    Vec final_bias;
};

// Index of the trace sample nearest to time t (ties go to the earlier sample).
inline std::size_t nearest_sample(const SampledSignal& sig, double t) {
    const auto& ts = sig.times();
    if (t < ts.front() || t > ts.back()) {
        throw DomainError("measurement time " + std::to_string(t) + " outside trace range [" +
                          std::to_string(ts.front()) + ", " + std::to_string(ts.back()) + "]");
    }
    const auto it = std::lower_bound(ts.begin(), ts.end(), t);
    auto k = static_cast<std::size_t>(it - ts.begin());
    if (k > 0 && (k == ts.size() || t - ts[k - 1] <= ts[k] - t)) --k;
    return k;
}

inline CorrectedOdometry bias_corrected_odometry(const ImuTrace& trace, const std::vector<VelMeasurement>& meas,
                                                 const FilterGains& gains, const Vec& v0, const Vec& p0,
                                                 const Vec& b0) {
    detail::check_trace(trace);
    gains.validate();
    const std::size_t d = trace.dim();
    detail::check_dim(v0, d, "v0");
    detail::check_dim(p0, d, "p0");
    detail::check_dim(b0, d, "b0");

    // Measurements grouped by snapped sample index; several may share one sample.
    std::vector<std::vector<const VelMeasurement*>> at_sample(trace.size());
    double last_t = -std::numeric_limits<double>::infinity();
    for (const auto& m : meas) {
        detail::check_dim(m.v, d, "measurement");
        if (m.t < last_t) throw DomainError("measurements must be sorted by time");
        last_t = m.t;
        at_sample[nearest_sample(trace, m.t)].push_back(&m);
    }

    Vec vel = v0;
    Vec pos = p0;
    Vec bias = b0;
    const auto correct = [&](std::size_t k) {
        for (const VelMeasurement* m : at_sample[k]) {
            const Vec innovation = m->v - vel;
            vel += gains.l1 * innovation;
            bias -= gains.l2 * innovation;
        }
    };

    CorrectedOdometry out{SampledSignal(d, axis_names("v", d)), SampledSignal(d, axis_names("p", d)),
                          SampledSignal(d, axis_names("b", d)), Vec(d)};
    correct(0);
    out.v.push_back(trace.time(0), vel);
    out.p.push_back(trace.time(0), pos);
    out.bias_history.push_back(trace.time(0), bias);
    for (std::size_t k = 0; k + 1 < trace.size(); ++k) {
        const double dt = trace.time(k + 1) - trace.time(k);
        const Vec a0 = trace.sample(k) - bias;
        const Vec a1 = trace.sample(k + 1) - bias;
        const Vec vel_prev = vel;
        vel += (0.5 * dt) * (a0 + a1);
        correct(k + 1);
        pos += (0.5 * dt) * (vel_prev + vel);
        out.v.push_back(trace.time(k + 1), vel);
        out.p.push_back(trace.time(k + 1), pos);
        out.bias_history.push_back(trace.time(k + 1), bias);
    }
    out.final_bias = bias;
    return out;
}

// Motion profiles for synthetic traces, applied identically on every axis.
struct Rest {};
struct ConstantAccel {
    double alpha;
};
struct Sinusoid {
    double amplitude;
    double omega;
};
using Profile = std::variant<Rest, ConstantAccel, Sinusoid>;

struct SynthConfig {
    Profile profile = Rest{};
    Vec bias = Vec(1);
    double noise_std = 0.0;
    double dt = 0.01;
    double T = 1.0;
    std::uint64_t seed = 1;
    Vec v0 = Vec(1);
    Vec p0 = Vec(1);
};

struct SynthResult {
    ImuTrace trace;
    SampledSignal truth_v;
    SampledSignal truth_p;
};

namespace detail {

// Portable standard normal draws: Box-Muller on mt19937_64 output, so traces
// are identical across standard library implementations.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

    double operator()() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(angle);
        has_spare_ = true;
        return r * std::cos(angle);
    }

private:
    double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace detail

// Samples t_k = k dt for k = 0..floor(T / dt). Measured acceleration is the
// true profile plus bias plus N(0, noise_std^2) noise; truth is analytic.
inline SynthResult synth_imu(const SynthConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw DomainError("synth_imu: dt must be positive");
    if (!(cfg.T >= cfg.dt)) throw DomainError("synth_imu: need T >= dt");
    if (!(cfg.T / cfg.dt <= ode::detail::kMaxSteps)) throw DomainError("synth_imu: T / dt exceeds the step limit");
    if (!(cfg.noise_std >= 0.0)) throw DomainError("synth_imu: noise_std must be non-negative");
    const std::size_t d = cfg.bias.size();
    if (d < 1 || d > 3) throw DimensionError("synth_imu: bias must have 1 to 3 axes");
    detail::check_dim(cfg.v0, d, "v0");
    detail::check_dim(cfg.p0, d, "p0");

    struct Kinematics {
        double a, v, p; // relative to v0 / p0 contributions
    };
    const auto truth = [&](double t) -> Kinematics {
        return std::visit(
            [t](const auto& prof) -> Kinematics {
                using P = std::decay_t<decltype(prof)>;
                if constexpr (std::is_same_v<P, Rest>) {
                    return {0.0, 0.0, 0.0};
                } else if constexpr (std::is_same_v<P, ConstantAccel>) {
                    return {prof.alpha, prof.alpha * t, 0.5 * prof.alpha * t * t};
                } else {
                    const double w = prof.omega;
                    const double amp = prof.amplitude;
                    return {amp * std::sin(w * t), amp / w * (1.0 - std::cos(w * t)),
                            amp / w * t - amp / (w * w) * std::sin(w * t)};
                }
            },
            cfg.profile);
    };

    detail::GaussianSource noise(cfg.seed);
    SynthResult out{SampledSignal(d, axis_names("a", d)), SampledSignal(d, axis_names("v", d)),
                    SampledSignal(d, axis_names("p", d))};
    const auto steps = static_cast<std::size_t>(std::floor(cfg.T / cfg.dt * (1.0 + 1e-12)));
    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * cfg.dt;
        const Kinematics kin = truth(t);
        Vec a(d);
        Vec v(d);
        Vec p(d);
        for (std::size_t c = 0; c < d; ++c) {
            a[c] = kin.a + cfg.bias[c] + (cfg.noise_std > 0.0 ? cfg.noise_std * noise() : 0.0);
            v[c] = cfg.v0[c] + kin.v;
            p[c] = cfg.p0[c] + cfg.v0[c] * t + kin.p;
        }
        out.trace.push_back(t, a);
        out.truth_v.push_back(t, v);
        out.truth_p.push_back(t, p);
    }
    return out;
}

// Measurements sampled from a velocity record every `period` seconds starting at t0.
inline std::vector<VelMeasurement> sample_measurements(const SampledSignal& velocity, double period) {
    if (!(period > 0.0)) throw DomainError("sample_measurements: period must be positive");
    std::vector<VelMeasurement> out;
    const double t0 = velocity.time(0);
    const double tf = velocity.times().back();
    for (std::size_t i = 0;; ++i) {
        const double t = t0 + static_cast<double>(i) * period;
        if (t > tf + 1e-9 * period) break;
        out.push_back({std::min(t, tf), velocity.sample(nearest_sample(velocity, std::min(t, tf)))});
    }
    return out;
}

} // namespace engcalc::odo
