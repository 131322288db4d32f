#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "engcalc/mech.hpp"
#include "support.hpp"

using namespace engcalc;
using namespace engcalc::mech;

namespace {

std::vector<MechanicalModel> zoo() {
    return {pendulum(), cart_pole_segway(), planar_ballbot(), gymnast_bar(), point_mass(2.0, 3)};
}

} // namespace

TEST(MassMatrix, Examples) {
    EXPECT_LE(testsupport::max_abs_diff(mass_matrix(point_mass(2.0), Vec{0.3, -1}), Mat{{2, 0}, {0, 2}}), 1e-6);
    EXPECT_NEAR(mass_matrix(pendulum({{"m", 1.0}, {"l", 2.0}}), Vec{0.7})(0, 0), 4.0, 1e-6);
}

TEST(MassMatrix, IndependentOfVelocityBasePoint) {
    // D is the q-dot Hessian; for quadratic K it is the same at any base velocity.
    testsupport::Rng rng(61);
    for (const auto& m : zoo()) {
        const Vec q = rng.vec(m.n_dof);
        const Vec qd0 = rng.vec(m.n_dof, -3, 3);
        const Mat at_base = diff::hessian([&](const Vec& qd) { return m.kinetic(q, qd); }, qd0,
                                          diff::DiffConfig{kEnergyStep, false});
        const Mat d = mass_matrix(m, q);
        EXPECT_LE(testsupport::max_abs_diff(at_base, d), 1e-6 * std::max(1.0, max_abs(d))) << m.name;
    }
}

TEST(MassMatrix, SymmetricPositiveDefiniteOnRandomStates) {
    testsupport::Rng rng(62);
    for (const auto& m : zoo()) {
        for (int trial = 0; trial < 100; ++trial) {
            const Mat d = mass_matrix(m, rng.vec(m.n_dof, -3, 3));
            EXPECT_EQ(d, transpose(d));
            // Gaussian elimination without pivoting: all pivots positive iff SPD.
            Mat a = d;
            for (std::size_t k = 0; k < a.rows(); ++k) {
                ASSERT_GT(a(k, k), 0.0) << m.name;
                for (std::size_t i = k + 1; i < a.rows(); ++i) {
                    const double f = a(i, k) / a(k, k);
                    for (std::size_t j = k; j < a.cols(); ++j) a(i, j) -= f * a(k, j);
                }
            }
        }
    }
}

TEST(Gravity, PendulumExamples) {
    const auto p = pendulum();
    EXPECT_NEAR(gravity_vector(p, Vec{0.0})[0], 0.0, 1e-12);
    EXPECT_NEAR(gravity_vector(p, Vec{std::numbers::pi / 2})[0], 9.81, 1e-8);
    EXPECT_EQ(gravity_vector(point_mass(1.0), Vec{1, 2}), Vec(2));
}

TEST(Coriolis, VanishesForConstantMassMatrix) {
    EXPECT_LE(max_abs(coriolis_matrix(point_mass(3.0), Vec{1, 2}, Vec{4, -1})), 1e-6);
    EXPECT_LE(max_abs(coriolis_matrix(pendulum(), Vec{0.4}, Vec{2.0})), 1e-6);
    EXPECT_LE(max_abs(coriolis_matrix(cart_pole_segway(), Vec{0.1, 0.8}, Vec(2))), 1e-12);
}

TEST(Coriolis, CartPoleMatchesHandDynamics) {
    const auto m = cart_pole_segway({{"m_cart", 1.0}, {"m_pole", 1.0}, {"l", 1.0}});
    const double th = std::numbers::pi / 4;
    const Vec qd{0.0, 1.0};
    const Vec cq = coriolis_matrix(m, Vec{0.0, th}, qd) * qd;
    EXPECT_NEAR(cq[0], -1.0 * 1.0 * std::sin(th) * 1.0, 1e-4);
    EXPECT_NEAR(cq[1], 0.0, 1e-4);
}

TEST(Coriolis, SkewSymmetryOfRateMinusTwiceCoriolis) {
    testsupport::Rng rng(63);
    for (const auto& m : zoo()) {
        for (int trial = 0; trial < 100; ++trial) {
            const Vec q = rng.vec(m.n_dof, -3, 3);
            const Vec qd = rng.vec(m.n_dof, -3, 3);
            const Mat s = mass_matrix_rate(m, q, qd) - 2.0 * coriolis_matrix(m, q, qd);
            EXPECT_LE(norm_inf(s + transpose(s)), 1e-5) << m.name;
        }
    }
}

TEST(ForwardDynamics, Examples) {
    const auto p = pendulum();
    EXPECT_NEAR(forward_dynamics(p, Vec{0.0}, Vec{0.0}, Vec{0.0})[0], 0.0, 1e-12);
    EXPECT_NEAR(forward_dynamics(p, Vec{std::numbers::pi / 2}, Vec{0.0}, Vec{0.0})[0], -9.81, 1e-5);
    const Vec a = forward_dynamics(point_mass(1.0), Vec(2), Vec(2), Vec{3, 4});
    EXPECT_NEAR(a[0], 3.0, 1e-9);
    EXPECT_NEAR(a[1], 4.0, 1e-9);
    EXPECT_THROW(forward_dynamics(p, Vec{0.0}, Vec{0.0}, Vec{1.0, 2.0}), DimensionError);
}

TEST(ForwardDynamics, AtRestEqualsMinusInverseMassTimesGravity) {
    testsupport::Rng rng(64);
    for (const auto& m : zoo()) {
        const Vec q = rng.vec(m.n_dof);
        const Vec expected = -lu_solve(mass_matrix(m, q), gravity_vector(m, q));
        EXPECT_LE(norm_inf(forward_dynamics(m, q, Vec(m.n_dof), Vec(m.n_inputs())) - expected), 1e-8) << m.name;
    }
}

TEST(ForwardDynamics, SingularMassMatrix) {
    MechanicalModel m = point_mass(1.0, 2);
    m.kinetic = [](const Vec&, const Vec& qd) { return 0.5 * qd[0] * qd[0]; };
    EXPECT_THROW(forward_dynamics(m, Vec(2), Vec(2), Vec(2)), SingularityError);
}

TEST(Simulate, PendulumAtRestStaysAtRest) {
    const auto s = simulate(pendulum(), nullptr, Vec{0.0}, Vec{0.0}, 1.0, 0.01);
    for (std::size_t k = 0; k < s.size(); ++k) {
        EXPECT_EQ(s.value(k, 0), 0.0);
        EXPECT_EQ(s.value(k, 1), 0.0);
    }
    EXPECT_EQ(s.names(), (std::vector<std::string>{"q0", "qd0"}));
}

TEST(Simulate, SmallAnglePeriod) {
    const auto p = pendulum();
    const auto s = simulate(p, nullptr, Vec{0.01}, Vec{0.0}, 10.0, 1e-3);
    // Downward zero crossings of theta, linearly interpolated.
    std::vector<double> crossings;
    for (std::size_t k = 1; k < s.size(); ++k) {
        const double a = s.value(k - 1, 0);
        const double b = s.value(k, 0);
        if (a > 0 && b <= 0) crossings.push_back(s.time(k - 1) + a / (a - b) * (s.time(k) - s.time(k - 1)));
    }
    ASSERT_GE(crossings.size(), 3u);
    const double period = (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
    const double expected = 2 * std::numbers::pi * std::sqrt(1.0 / 9.81);
    EXPECT_LT(std::abs(period - expected) / expected, 0.005);
}

TEST(Simulate, UnforcedPendulumConservesEnergy) {
    const auto p = pendulum();
    const auto s = simulate(p, nullptr, Vec{1.0}, Vec{0.0}, 10.0, 1e-3);
    const double e0 = total_energy(p, Vec{1.0}, Vec{0.0});
    const std::size_t last = s.size() - 1;
    const double e1 = total_energy(p, Vec{s.value(last, 0)}, Vec{s.value(last, 1)});
    EXPECT_LT(std::abs(e1 - e0) / std::abs(e0), 1e-6);
}

TEST(Simulate, EnergyBalanceWithInputs) {
    testsupport::Rng rng(65);
    for (const auto& m : {pendulum(), cart_pole_segway(), planar_ballbot()}) {
        const Controller u = [&m](double t, const Vec&, const Vec&) {
            Vec out(m.n_inputs());
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::sin(2 * t + static_cast<double>(i));
            return out;
        };
        const Vec q0 = rng.vec(m.n_dof, -0.5, 0.5);
        const Vec qd0 = rng.vec(m.n_dof, -0.5, 0.5);
        const double dt = 1e-3;
        const auto s = simulate(m, u, q0, qd0, 1.0, dt);
        const auto energy = [&](std::size_t k) {
            const Vec x = s.sample(k);
            return total_energy(m, slice(x, 0, m.n_dof), slice(x, m.n_dof, m.n_dof));
        };
        // Integrated balance: E(t) - E(0) equals the work done by the inputs.
        const double e0 = energy(0);
        double work = 0.0;
        double prev_power = 0.0;
        for (std::size_t k = 0; k < s.size(); ++k) {
            const Vec qd = slice(s.sample(k), m.n_dof, m.n_dof);
            const double power = dot(qd, m.input_map * u(s.time(k), Vec(), Vec()));
            if (k > 0) work += 0.5 * (s.time(k) - s.time(k - 1)) * (prev_power + power);
            prev_power = power;
            EXPECT_NEAR(energy(k) - e0, work, 1e-6 * std::max(1.0, std::abs(e0))) << m.name << " t = " << s.time(k);
        }
    }
}

TEST(Zoo, EnergiesAreWellFormed) {
    for (const auto& m : zoo()) EXPECT_NO_THROW(validate_energies(m)) << m.name;
}

TEST(Zoo, ParameterOverridesAndLookup) {
    EXPECT_EQ(make_model("segway", {{"l", 2.0}}).param("l"), 2.0);
    EXPECT_THROW(make_model("segway", {{"length", 2.0}}), DomainError);
    EXPECT_THROW(make_model("unicycle"), DomainError);
    EXPECT_NEAR(gymnast_inertia(gymnast_bar()), 60 * 0.81, 1e-12);
    EXPECT_EQ(planar_ballbot().n_inputs(), 1u);
    EXPECT_EQ(gymnast_bar().n_inputs(), 0u);
}
