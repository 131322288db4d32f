#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "engcalc/odo.hpp"
#include "support.hpp"

using namespace engcalc;
using namespace engcalc::odo;

namespace {

ImuTrace uniform_trace(std::size_t d, double T, double dt, const std::function<Vec(double)>& a) {
    ImuTrace tr(d, axis_names("a", d));
    const auto n = static_cast<std::size_t>(std::llround(T / dt));
    for (std::size_t k = 0; k <= n; ++k) tr.push_back(static_cast<double>(k) * dt, a(static_cast<double>(k) * dt));
    return tr;
}

SynthConfig biased_scenario() {
    SynthConfig cfg;
    cfg.profile = Rest{};
    cfg.bias = Vec{0.1};
    cfg.dt = 0.01;
    cfg.T = 20.0;
    cfg.v0 = Vec{0.0};
    cfg.p0 = Vec{0.0};
    return cfg;
}

} // namespace

TEST(DeadReckon, ConstantVelocity) {
    const auto r = dead_reckon(uniform_trace(1, 2.0, 0.1, [](double) { return Vec{0.0}; }), Vec{3.0}, Vec{0.0});
    EXPECT_NEAR(r.p.value(r.p.size() - 1, 0), 6.0, 1e-12);
    EXPECT_EQ(r.v.names()[0], "vx");
    EXPECT_EQ(r.p.names()[0], "px");
}

TEST(DeadReckon, UnitAcceleration) {
    const auto r = dead_reckon(uniform_trace(1, 2.0, 0.25, [](double) { return Vec{1.0}; }), Vec{0.0}, Vec{0.0});
    EXPECT_EQ(r.v.value(r.v.size() - 1, 0), 2.0);
    EXPECT_EQ(r.p.value(r.p.size() - 1, 0), 2.0);
}

TEST(DeadReckon, AxesAreIndependent) {
    const auto r = dead_reckon(uniform_trace(2, 1.0, 0.01, [](double t) { return Vec{0.0, std::sin(t)}; }),
                               Vec{0.0, 1.0}, Vec{-2.5, 0.0});
    for (std::size_t k = 0; k < r.p.size(); ++k) EXPECT_EQ(r.p.value(k, 0), -2.5);
}

TEST(DeadReckon, DimensionChecks) {
    const auto tr = uniform_trace(2, 1.0, 0.1, [](double) { return Vec{0.0, 0.0}; });
    EXPECT_THROW(dead_reckon(tr, Vec{0.0}, Vec{0.0, 0.0}), DimensionError);
    EXPECT_THROW(dead_reckon(uniform_trace(4, 1.0, 0.1, [](double) { return Vec(4); }), Vec(4), Vec(4)),
                 DimensionError);
}

TEST(DeadReckon, SecondOrderPositionError) {
    SynthConfig cfg;
    cfg.profile = Sinusoid{1.5, 2.0};
    cfg.T = 5.0;
    double prev = 0.0;
    for (double dt : {0.02, 0.01, 0.005}) {
        cfg.dt = dt;
        const auto s = synth_imu(cfg);
        const auto r = dead_reckon(s.trace, cfg.v0, cfg.p0);
        double err = 0.0;
        for (std::size_t k = 0; k < r.p.size(); ++k) err = std::max(err, std::abs(r.p.value(k, 0) - s.truth_p.value(k, 0)));
        if (prev > 0) {
            EXPECT_GT(prev / err, 3.5);
            EXPECT_LT(prev / err, 4.5);
        }
        prev = err;
    }
}

TEST(DeadReckon, DriftLawForConstantBias) {
    const auto s = synth_imu(biased_scenario());
    const auto r = dead_reckon(s.trace, Vec{0.0}, Vec{0.0});
    EXPECT_NEAR(r.v.value(r.v.size() - 1, 0), 0.1 * 20.0, 1e-9);
}

TEST(Corrected, FilterOffReproducesDeadReckoning) {
    SynthConfig cfg;
    cfg.profile = Sinusoid{1.0, 1.0};
    cfg.bias = Vec{0.0, 0.0};
    cfg.v0 = Vec{0.5, 0.0};
    cfg.p0 = Vec{1.0, 2.0};
    cfg.T = 3.0;
    const auto s = synth_imu(cfg);
    const auto meas = sample_measurements(s.truth_v, 0.5);
    const auto plain = dead_reckon(s.trace, cfg.v0, cfg.p0);
    const auto filt = bias_corrected_odometry(s.trace, meas, {0.0, 0.0}, cfg.v0, cfg.p0, Vec(2));
    for (std::size_t k = 0; k < plain.v.size(); ++k)
        for (std::size_t c = 0; c < 2; ++c) {
            EXPECT_NEAR(filt.v.value(k, c), plain.v.value(k, c), 1e-12);
            EXPECT_NEAR(filt.p.value(k, c), plain.p.value(k, c), 1e-12);
        }
}

TEST(Corrected, RecoversConstantBias) {
    const auto s = synth_imu(biased_scenario());
    const auto meas = sample_measurements(s.truth_v, 0.5);
    const auto r = bias_corrected_odometry(s.trace, meas, {0.5, 0.5}, Vec{0.0}, Vec{0.0}, Vec{0.0});
    EXPECT_NEAR(r.final_bias[0], 0.1, 0.01);
    EXPECT_LE(std::abs(r.v.value(r.v.size() - 1, 0)), 0.02);
    EXPECT_EQ(r.bias_history.names()[0], "bx");

    const auto off = bias_corrected_odometry(s.trace, meas, {0.0, 0.0}, Vec{0.0}, Vec{0.0}, Vec{0.0});
    EXPECT_NEAR(off.v.value(off.v.size() - 1, 0), 2.0, 1e-9);
    const std::size_t last = r.p.size() - 1;
    EXPECT_LT(std::abs(r.p.value(last, 0) - s.truth_p.value(last, 0)),
              std::abs(off.p.value(last, 0) - s.truth_p.value(last, 0)));
}

TEST(Corrected, Validation) {
    const auto s = synth_imu(biased_scenario());
    EXPECT_THROW(bias_corrected_odometry(s.trace, {{25.0, Vec{0.0}}}, {0.5, 0.5}, Vec(1), Vec(1), Vec(1)), DomainError);
    EXPECT_THROW(bias_corrected_odometry(s.trace, {}, {2.5, 0.5}, Vec(1), Vec(1), Vec(1)), DomainError);
    EXPECT_THROW(bias_corrected_odometry(s.trace, {}, {0.5, -1}, Vec(1), Vec(1), Vec(1)), DomainError);
    EXPECT_THROW(bias_corrected_odometry(s.trace, {{2.0, Vec{0.0}}, {1.0, Vec{0.0}}}, {0.5, 0.5}, Vec(1), Vec(1), Vec(1)),
                 DomainError);
}

TEST(NearestSample, SnapsToClosestTimestamp) {
    const auto tr = uniform_trace(1, 1.0, 0.1, [](double) { return Vec{0.0}; });
    EXPECT_EQ(nearest_sample(tr, 0.0), 0u);
    EXPECT_EQ(nearest_sample(tr, 0.34), 3u);
    EXPECT_EQ(nearest_sample(tr, 0.36), 4u);
    EXPECT_EQ(nearest_sample(tr, 1.0), 10u);
}

TEST(Synth, RestIsZero) {
    SynthConfig cfg;
    cfg.p0 = Vec{4.0};
    const auto s = synth_imu(cfg);
    for (std::size_t k = 0; k < s.trace.size(); ++k) {
        EXPECT_EQ(s.trace.value(k, 0), 0.0);
        EXPECT_EQ(s.truth_p.value(k, 0), 4.0);
    }
}

TEST(Synth, ConstantAccelerationTruth) {
    SynthConfig cfg;
    cfg.profile = ConstantAccel{2.0};
    const auto s = synth_imu(cfg);
    for (std::size_t k = 0; k < s.truth_v.size(); ++k) EXPECT_EQ(s.truth_v.value(k, 0), 2.0 * s.truth_v.time(k));
}

TEST(Synth, SeedDeterminism) {
    SynthConfig cfg;
    cfg.bias = Vec{0.1, -0.2, 0.05};
    cfg.v0 = Vec(3);
    cfg.p0 = Vec(3);
    cfg.noise_std = 0.3;
    cfg.seed = 99;
    std::ostringstream a, b;
    write_csv(a, synth_imu(cfg).trace);
    write_csv(b, synth_imu(cfg).trace);
    EXPECT_EQ(a.str(), b.str());
    cfg.seed = 100;
    std::ostringstream c;
    write_csv(c, synth_imu(cfg).trace);
    EXPECT_NE(a.str(), c.str());
}

TEST(Synth, NoiseHasRequestedSpread) {
    SynthConfig cfg;
    cfg.noise_std = 0.5;
    cfg.T = 100.0;
    const auto s = synth_imu(cfg);
    double sum = 0, sq = 0;
    for (std::size_t k = 0; k < s.trace.size(); ++k) {
        sum += s.trace.value(k, 0);
        sq += s.trace.value(k, 0) * s.trace.value(k, 0);
    }
    const double n = static_cast<double>(s.trace.size());
    EXPECT_NEAR(sum / n, 0.0, 0.03);
    EXPECT_NEAR(std::sqrt(sq / n), 0.5, 0.02);
}

TEST(Synth, Validation) {
    SynthConfig cfg;
    cfg.dt = 0.0;
    EXPECT_THROW(synth_imu(cfg), DomainError);
    cfg.dt = -1.0;
    EXPECT_THROW(synth_imu(cfg), DomainError);
}
