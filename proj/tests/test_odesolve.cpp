#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "engcalc/odesolve.hpp"
#include "engcalc/poly.hpp"
#include "support.hpp"

using namespace engcalc;
using namespace engcalc::ode;

namespace {

IvpProblem decay(double tf = 1.0) {
    return {[](double, const Vec& x) { return -x; }, Vec{1.0}, 0.0, tf};
}

double terminal_error(SampledSignal (*solver)(const IvpProblem&, double), double dt) {
    const auto s = solver(decay(), dt);
    return std::abs(s.value(s.size() - 1, 0) - std::exp(-1.0));
}

} // namespace

TEST(Integrators, ConstantSolution) {
    const IvpProblem p{[](double, const Vec&) { return Vec{0.0}; }, Vec{5.0}, 0.0, 2.0};
    for (const auto& s : {euler_solve(p, 0.1), rk4_solve(p, 0.1)})
        for (std::size_t k = 0; k < s.size(); ++k) EXPECT_EQ(s.value(k, 0), 5.0);
}

TEST(Integrators, Rk4DecayAccuracy) { EXPECT_LT(terminal_error(rk4_solve, 0.01), 1e-8); }

TEST(Integrators, EulerIsFirstOrder) {
    const double r = terminal_error(euler_solve, 0.01) / terminal_error(euler_solve, 0.005);
    EXPECT_GE(r, 1.8);
    EXPECT_LE(r, 2.2);
}

TEST(Integrators, Rk4IsFourthOrder) {
    const double r = terminal_error(rk4_solve, 0.1) / terminal_error(rk4_solve, 0.05);
    EXPECT_GE(r, 14.0);
    EXPECT_LE(r, 18.0);
}

TEST(Integrators, LastStepLandsOnFinalTime) {
    const auto s = rk4_solve(decay(1.05), 0.1);
    EXPECT_EQ(s.times().back(), 1.05);
    EXPECT_NEAR(s.value(s.size() - 1, 0), std::exp(-1.05), 1e-6);
    EXPECT_EQ(s.names()[0], "x0");
}

TEST(Integrators, Errors) {
    EXPECT_THROW(rk4_solve(decay(), 0.0), DomainError);
    const IvpProblem blow{[](double, const Vec& x) { return Vec{x[0] / 0.0}; }, Vec{1.0}, 0.0, 1.0};
    EXPECT_THROW(rk4_solve(blow, 0.1), DomainError);
    const IvpProblem wrong{[](double, const Vec&) { return Vec{1.0, 2.0}; }, Vec{1.0}, 0.0, 1.0};
    EXPECT_THROW(euler_solve(wrong, 0.1), DimensionError);
}

TEST(Expm, Examples) {
    testsupport::Rng rng(51);
    EXPECT_EQ(matrix_exponential(rng.mat(3, 3), 0.0), Mat::identity(3));
    EXPECT_LE(testsupport::max_abs_diff(matrix_exponential(Mat{{0, 1}, {0, 0}}, 2.5), Mat{{1, 2.5}, {0, 1}}), 1e-15);
    const Mat e = matrix_exponential(Mat{{1, 0}, {0, 2}}, 1.0);
    EXPECT_NEAR(e(0, 0), std::numbers::e, 1e-12 * std::numbers::e);
    EXPECT_NEAR(e(1, 1), std::exp(2.0), 1e-12 * std::exp(2.0));
    EXPECT_EQ(e(0, 1), 0.0);
    EXPECT_THROW(matrix_exponential(Mat(2, 3), 1.0), DimensionError);
}

TEST(Expm, Semigroup) {
    testsupport::Rng rng(52);
    for (int trial = 0; trial < 20; ++trial) {
        Mat a = rng.mat(3, 3);
        for (std::size_t i = 0; i < 3; ++i) a(i, i) -= 2.0;
        const double t1 = rng.uniform(0, 2);
        const double t2 = rng.uniform(0, 2);
        EXPECT_LE(testsupport::max_abs_diff(matrix_exponential(a, t1 + t2),
                                            matrix_exponential(a, t1) * matrix_exponential(a, t2)),
                  1e-10);
    }
}

TEST(Expm, ColumnsMatchRk4) {
    testsupport::Rng rng(53);
    const Mat a = rng.mat(3, 3);
    const Mat e = matrix_exponential(a, 1.0);
    for (std::size_t j = 0; j < 3; ++j) {
        const auto s = rk4_solve({[&](double, const Vec& x) { return a * x; }, Vec::unit(3, j), 0.0, 1.0}, 1e-3);
        EXPECT_LE(norm_inf(s.sample(s.size() - 1) - e.col(j)), 1e-6);
    }
}

TEST(CharPoly, Examples) {
    EXPECT_EQ(char_poly(Mat::identity(2)), (Polynomial{1, -2, 1}));
    EXPECT_EQ(char_poly(Mat{{0, 1}, {-2, -3}}), (Polynomial{2, 3, 1}));
    EXPECT_THROW(char_poly(Mat(13, 13)), DimensionError);
}

TEST(CharPoly, ConstantTermIsSignedDeterminant) {
    testsupport::Rng rng(54);
    for (int trial = 0; trial < 50; ++trial) {
        const auto n = static_cast<std::size_t>(rng.integer(1, 6));
        const Mat a = rng.mat(n, n);
        const double sign = n % 2 ? -1.0 : 1.0;
        EXPECT_NEAR(char_poly(a)[0], sign * determinant(a), 1e-8);
    }
}

TEST(Eigenvalues, Examples) {
    auto ev = eigenvalues(Mat{{3, 0}, {0, -1}});
    ASSERT_EQ(ev.size(), 2u);
    EXPECT_NEAR(ev[0].real(), -1, 1e-12);
    EXPECT_NEAR(ev[1].real(), 3, 1e-12);

    ev = eigenvalues(Mat{{0, 1}, {-2, -3}});
    EXPECT_NEAR(ev[0].real(), -2, 1e-12);
    EXPECT_NEAR(ev[1].real(), -1, 1e-12);

    ev = eigenvalues(Mat{{0, -1}, {1, 0}});
    EXPECT_EQ(ev[0], std::conj(ev[1]));
    EXPECT_NEAR(ev[0].imag(), -1, 1e-12);
    EXPECT_NEAR(ev[0].real(), 0, 1e-12);
}

TEST(Eigenvalues, SumEqualsTrace) {
    testsupport::Rng rng(55);
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = static_cast<std::size_t>(rng.integer(1, 6));
        const Mat a = rng.mat(n, n);
        Complex sum = 0;
        for (const auto& l : eigenvalues(a)) sum += l;
        EXPECT_NEAR(sum.real(), trace(a), 1e-7);
        EXPECT_NEAR(sum.imag(), 0.0, 1e-7);
    }
}

TEST(Polynomial, Arithmetic) {
    EXPECT_EQ((Polynomial{1, 1}) * (Polynomial{1, -1}), (Polynomial{1, 0, -1}));
    EXPECT_EQ(std::abs((Polynomial{1, 0, 1})(Complex(0, 1))), 0.0);
    EXPECT_EQ(mul(Polynomial{1, 1}, Polynomial{2, 1}), (Polynomial{2, 3, 1}));
    EXPECT_EQ(add(Polynomial{1, 2, 3}, Polynomial{0, 0, -3}), (Polynomial{1, 2}));
    EXPECT_EQ(to_string(Polynomial{2, 3, 1}), "[2,3,1]");
    EXPECT_EQ(to_string(Polynomial{}), "[0]");
    EXPECT_EQ((Polynomial{0, 0}).degree(), -1);
}

TEST(Roots, Examples) {
    auto r = real_poly_roots(Polynomial{-1, 0, 1});
    EXPECT_NEAR(r[0].real(), -1, 1e-12);
    EXPECT_NEAR(r[1].real(), 1, 1e-12);
    r = real_poly_roots(Polynomial{2, 3, 1});
    EXPECT_NEAR(r[0].real(), -2, 1e-12);
    EXPECT_NEAR(r[1].real(), -1, 1e-12);
}

TEST(Roots, TripleRootResiduals) {
    const auto res = roots_dk(Polynomial{1, 3, 3, 1});
    ASSERT_EQ(res.roots.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_LT(res.residuals[i], 1e-6);
        EXPECT_NEAR(std::abs(res.roots[i] + 1.0), 0.0, 1e-4);
    }
}

TEST(Roots, RandomSeparatedRootsHaveSmallResiduals) {
    testsupport::Rng rng(56);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = rng.integer(1, 6);
        // Roots on a grid of spacing 0.5 so they stay well separated.
        std::vector<double> picks;
        while (static_cast<int>(picks.size()) < n) {
            const double r = 0.5 * rng.integer(-8, 8);
            if (std::find(picks.begin(), picks.end(), r) == picks.end()) picks.push_back(r);
        }
        Polynomial p{1.0};
        for (double r : picks) p = p * Polynomial{-r, 1.0};
        const double scale = p.max_abs_coeff();
        for (const double res : roots_dk(p).residuals) EXPECT_LE(res, 1e-8 * scale);
    }
}

TEST(Roots, Errors) {
    EXPECT_THROW(roots_dk(Polynomial{3.0}), DomainError);
    EXPECT_THROW(roots_dk(Polynomial{1, 0, 0, 0, 0, 1}, 1e-30, 2), ConvergenceError);
}
