#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "engcalc/opt.hpp"
#include "support.hpp"

using namespace engcalc;
using namespace engcalc::opt;

namespace {

ConstrainedProblem line_problem() {
    return {[](const Vec& x) { return x[0] * x[0] + x[1] * x[1]; },
            [](const Vec& x) { return Vec{x[0] + x[1] - 2.0}; }, 2, 1};
}

ConstrainedProblem circle_problem() {
    return {[](const Vec& x) { return x[0] + x[1]; },
            [](const Vec& x) { return Vec{x[0] * x[0] + x[1] * x[1] - 1.0}; }, 2, 1};
}

double stationarity(const ConstrainedProblem& p, const Vec& x, const Vec& lambda) {
    return norm_inf(diff::gradient(p.f, x) + transpose(diff::jacobian(p.h, x)) * lambda);
}

} // namespace

TEST(Bisection, Examples) {
    EXPECT_NEAR(bisection([](double x) { return x * x - 2; }, 1, 2, 1e-10), std::sqrt(2.0), 1e-10);
    EXPECT_NEAR(bisection([](double x) { return x; }, -1, 2, 1e-12), 0.0, 1e-12);
    EXPECT_THROW(bisection([](double x) { return x * x + 1; }, 0, 1, 1e-8), DomainError);
    EXPECT_THROW(bisection([](double x) { return x; }, -1, 2, 1e-12, 10), ConvergenceError);
}

TEST(Bisection, WidthHalvesAndSignChangeIsKept) {
    std::vector<Bracket> trail;
    const auto f = [](double x) { return std::cos(x) - x; };
    (void)bisection(f, 0.0, 1.0, 1e-9, 200, &trail);
    ASSERT_GT(trail.size(), 10u);
    for (std::size_t i = 1; i < trail.size(); ++i) {
        EXPECT_EQ(trail[i].b - trail[i].a, 0.5 * (trail[i - 1].b - trail[i - 1].a));
        EXPECT_LE(f(trail[i].a) * f(trail[i].b), 0.0);
    }
}

TEST(Newton, SquareRootOfTwo) {
    const auto r = newton_root([](const Vec& x) { return Vec{x[0] * x[0] - 2}; }, Vec{1.0});
    EXPECT_NEAR(r.x[0], std::sqrt(2.0), 1e-12);
    EXPECT_LE(r.iterations, 8);
}

TEST(Newton, AffineSolvedInOneStep) {
    const Mat a{{3, 1}, {1, 2}};
    const Vec b{9, 8};
    const auto r = newton_root([&](const Vec& x) { return a * x - b; }, Vec{0, 0}, 1e-8);
    EXPECT_EQ(r.iterations, 1);
    EXPECT_LE(norm_inf(a * r.x - b), 1e-8);
}

TEST(Newton, DegenerateRoot) {
    EXPECT_THROW(newton_root([](const Vec& x) { return Vec{x[0] * x[0]}; }, Vec{1.0}, 1e-14, 20), ConvergenceError);
    EXPECT_THROW(newton_root([](const Vec& x) { return Vec{x[0] * 0.0 + 1.0}; }, Vec{1.0}), SingularityError);
}

TEST(GradientDescent, Quadratic) {
    const auto f = [](const Vec& x) { return (x[0] - 3) * (x[0] - 3) + (x[1] + 1) * (x[1] + 1); };
    const auto r = gradient_descent(f, Vec{0, 0}, DescentConfig::armijo());
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.x[0], 3.0, 1e-6);
    EXPECT_NEAR(r.x[1], -1.0, 1e-6);

    const auto again = gradient_descent(f, Vec{3, -1}, DescentConfig::armijo());
    EXPECT_TRUE(again.converged);
    EXPECT_LE(again.iterations, 1);
    EXPECT_LE(norm_inf(again.x - Vec{3, -1}), 1e-8);
}

TEST(GradientDescent, Rosenbrock) {
    const auto f = [](const Vec& x) { return (1 - x[0]) * (1 - x[0]) + 100 * std::pow(x[1] - x[0] * x[0], 2); };
    const auto r = gradient_descent(f, Vec{-1.2, 1}, DescentConfig::armijo());
    EXPECT_LT(r.f_value, 1e-6);
}

TEST(GradientDescent, ScalingObjectiveKeepsArgmin) {
    const auto f = [](const Vec& x) { return (x[0] - 3) * (x[0] - 3) + 2 * (x[1] + 1) * (x[1] + 1) + x[0] * x[1]; };
    const auto base = gradient_descent(f, Vec{0, 0}, DescentConfig::armijo());
    for (double c : {0.1, 7.0, 250.0}) {
        const auto scaled = gradient_descent([&](const Vec& x) { return c * f(x); }, Vec{0, 0}, DescentConfig::armijo());
        EXPECT_LE(norm_inf(scaled.x - base.x), 1e-6) << "c = " << c;
    }
}

TEST(GradientDescent, NonFiniteObjective) {
    EXPECT_THROW(gradient_descent([](const Vec& x) { return std::log(x[0]); }, Vec{-1.0}), DomainError);
    DescentConfig bad;
    bad.alpha = 0;
    EXPECT_THROW(gradient_descent([](const Vec& x) { return x[0]; }, Vec{1.0}, bad), DomainError);
}

TEST(ConstrainedDescent, LineBenchmark) {
    const auto p = line_problem();
    const auto r = constrained_descent(p, Vec{0, 0});
    EXPECT_NEAR(r.x[0], 1.0, 1e-6);
    EXPECT_NEAR(r.x[1], 1.0, 1e-6);
    EXPECT_NEAR(r.lambda[0], -2.0, 1e-6);
}

TEST(ConstrainedDescent, CircleBenchmark) {
    const auto p = circle_problem();
    const auto r = constrained_descent(p, Vec{1, 0});
    EXPECT_NEAR(r.x[0], -std::sqrt(0.5), 1e-6);
    EXPECT_NEAR(r.x[1], -std::sqrt(0.5), 1e-6);
    EXPECT_LE(r.feasibility, 1e-7);
    EXPECT_LE(stationarity(p, r.x, r.lambda), 10 * DescentConfig{}.tol);
}

TEST(ConstrainedDescent, RestorationNeverIncreasesInfeasibility) {
    for (const auto& p : {line_problem(), circle_problem()}) {
        const auto r = constrained_descent(p, Vec{1, 0});
        for (std::size_t k = 1; k < r.feasibility_history.size(); ++k)
            EXPECT_LE(r.feasibility_history[k], r.feasibility_history[k - 1] + 1e-12);
    }
}

TEST(ConstrainedDescent, RankDeficientConstraints) {
    const ConstrainedProblem dup{[](const Vec& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; },
                                 [](const Vec& x) { return Vec{x[0] - 1, x[0] - 1}; }, 3, 2};
    EXPECT_THROW(constrained_descent(dup, Vec{0, 0, 0}), SingularityError);
    const ConstrainedProblem square{[](const Vec& x) { return x[0]; }, [](const Vec& x) { return Vec{x[0]}; }, 1, 1};
    EXPECT_THROW(constrained_descent(square, Vec{0}), DimensionError);
}

TEST(ConstrainedDescent, BudgetExhaustion) {
    DescentConfig cfg;
    cfg.max_iters = 3;
    EXPECT_THROW(constrained_descent(circle_problem(), Vec{1, 0}, cfg), ConvergenceError);
}

TEST(Lagrange, LineBenchmark) {
    const auto r = lagrange_solve(line_problem(), Vec{0, 0}, Vec{0});
    EXPECT_NEAR(r.x[0], 1.0, 1e-8);
    EXPECT_NEAR(r.x[1], 1.0, 1e-8);
    EXPECT_NEAR(r.lambda[0], -2.0, 1e-8);
}

TEST(Lagrange, AgreesWithConstrainedDescent) {
    for (const auto& [p, x0] : {std::pair{line_problem(), Vec{0, 0}}, std::pair{circle_problem(), Vec{1, 0}}}) {
        const auto cd = constrained_descent(p, x0);
        const auto lg = lagrange_solve(p, cd.x + Vec{0.05, -0.03}, Vec{0.5});
        EXPECT_LE(norm_inf(cd.x - lg.x), 1e-6);
        EXPECT_LE(norm_inf(cd.lambda - lg.lambda), 1e-6);
    }
}

TEST(Lagrange, CanLandOnConstrainedMaximum) {
    const auto r = lagrange_solve(circle_problem(), Vec{0.8, 0.6}, Vec{-0.5});
    EXPECT_NEAR(r.x[0], std::sqrt(0.5), 1e-8);
    EXPECT_NEAR(r.x[1], std::sqrt(0.5), 1e-8);
}

TEST(FreeThrow, LinearExamples) {
    const FreeThrowParams p;
    const Vec v = freethrow_linear(p, 1.0);
    EXPECT_NEAR(v[0], 4.6, 1e-12);
    EXPECT_NEAR(v[1], 5.955, 1e-12);
    EXPECT_LE(norm_inf(ballistic(p.p0, v, p.g, 1.0) - p.p_h), 1e-12);

    FreeThrowParams flat{Vec{1, 1}, Vec{4, 1}, 0.0};
    EXPECT_EQ(freethrow_linear(flat, 1.0), (Vec{3, 0}));
    EXPECT_THROW(freethrow_linear(p, 0.0), DomainError);
    EXPECT_THROW((FreeThrowParams{Vec{0, 2}, Vec{-1, 3}, 9.81}).validate(), DomainError);
}

TEST(FreeThrow, FixedTimeMatchesLinearSolve) {
    testsupport::Rng rng(81);
    for (int trial = 0; trial < 20; ++trial) {
        const FreeThrowParams p{Vec{0, 2}, Vec{rng.uniform(3, 8), rng.uniform(2.5, 4)}, 9.81};
        const double tf = rng.uniform(0.6, 1.4);
        const auto r = freethrow_opt(p, FixedTf{tf}, Vec{5, 5, 1});
        EXPECT_LE(norm_inf(r.v - freethrow_linear(p, tf)), 1e-5);
        EXPECT_NEAR(r.tf, tf, 1e-8);
    }
}

TEST(FreeThrow, FreeModeAndFixedSpeed) {
    const FreeThrowParams p;
    EXPECT_LT(freethrow_opt(p, FreeMode{}).miss_distance, 1e-6);
    EXPECT_LT(freethrow_opt(p, FreeMode{}, Vec{3, 3, 0.8}).miss_distance, 1e-6);

    const double s = 9.0;
    const auto r = freethrow_opt(p, FixedSpeed{s});
    EXPECT_NEAR(r.v[0] * r.v[0] + r.v[1] * r.v[1], s * s, 1e-8);
    EXPECT_LT(r.miss_distance, 1e-4);
    EXPECT_THROW(freethrow_opt(p, FixedSpeed{2.0}), DomainError);
}

TEST(Gymnast, NoRotationNeededGivesZeroSpin) {
    GymnastModel m;
    m.p0 = Vec{0, 3};
    m.p_land = Vec{0, 0};
    const auto r = gymnast_optimize(m);
    EXPECT_NEAR(r.omega, 0.0, 1e-7);
    EXPECT_LE(norm_inf(r.residuals), 1e-7);
    // Closed form: zero launch speed, free fall of 3 m.
    EXPECT_NEAR(r.tf, std::sqrt(6.0 / m.g), 1e-6);
    EXPECT_NEAR(r.v0[1], (-3 + 0.5 * m.g * r.tf * r.tf) / r.tf, 1e-9);
}

TEST(Gymnast, RotationAndMassInvariance) {
    GymnastModel m;
    m.p0 = Vec{0, 3};
    m.p_land = Vec{1.5, 0};
    m.theta_land = 2 * std::numbers::pi;
    const auto a = gymnast_optimize(m);
    EXPECT_LE(norm_inf(a.residuals), 1e-7);
    m.m1 *= 2;
    m.m2 *= 2;
    const auto b = gymnast_optimize(m);
    EXPECT_NEAR(a.tf, b.tf, 1e-6);
    EXPECT_NEAR(a.omega, b.omega, 1e-6);
    EXPECT_LE(norm_inf(a.v0 - b.v0), 1e-6);
    EXPECT_NEAR(b.objective, 2 * a.objective, 1e-6 * b.objective);
}

TEST(Diver, ConstraintsSatisfied) {
    const DiverModel m;
    const auto r = diver_optimize(m);
    EXPECT_LT(std::abs(r.entry_angle_residual), 1e-6);
    EXPECT_LT(std::abs(r.clearance_residual), 1e-6);
    EXPECT_LE(r.t_tuck_start, r.t_tuck_end);
    EXPECT_LE(r.t_tuck_end, r.t_entry);
}

TEST(Diver, RigidCaseMatchesClosedForm) {
    DiverModel m;
    m.rigid = true;
    m.k = 1;
    m.d_min = 1.0;
    const auto r = diver_optimize(m);
    const double te = diver_entry_time(m, r.v0[1]);
    EXPECT_NEAR(r.v0[0], m.d_min / te, 1e-6);
    EXPECT_NEAR(r.L, std::numbers::pi * m.I_open / te, 1e-4);
}

TEST(Diver, EmptyTuckWindowIsRigid) {
    const DiverModel m;
    for (double t : {0.0, 0.4, 1.1}) EXPECT_EQ(diver_entry_angle(m, 0.7, 12.0, t, t), 12.0 / m.I_open * diver_entry_time(m, 0.7));
    DiverModel bad;
    bad.I_tuck = bad.I_open;
    EXPECT_THROW(diver_optimize(bad), DomainError);
}
