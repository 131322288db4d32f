#include <gtest/gtest.h>

#include <cmath>

#include "engcalc/diffnum.hpp"
#include "support.hpp"

using namespace engcalc;
using namespace engcalc::diff;

TEST(OneSidedLimit, SignFunction) {
    const auto sgn = [](double x) { return std::abs(x) / x; };
    EXPECT_EQ(one_sided_limit(sgn, 0.0, Side::right, 1e-12), 1.0);
    EXPECT_EQ(one_sided_limit(sgn, 0.0, Side::left, 1e-12), -1.0);
}

TEST(OneSidedLimit, Sinc) {
    const auto sinc = [](double x) { return std::sin(x) / x; };
    EXPECT_NEAR(one_sided_limit(sinc, 0.0, Side::right, 1e-10), 1.0, 1e-8);
    EXPECT_NEAR(one_sided_limit(sinc, 0.0, Side::left, 1e-10), 1.0, 1e-8);
}

TEST(OneSidedLimit, Divergence) {
    EXPECT_THROW(one_sided_limit([](double x) { return 1.0 / x; }, 0.0, Side::right, 1e-8), ConvergenceError);
    EXPECT_THROW(one_sided_limit([](double x) { return std::sin(1.0 / x); }, 0.0, Side::right, 1e-8), ConvergenceError);
}

TEST(OneSidedLimit, NeverEvaluatesAtThePoint) {
    const double x0 = 0.3;
    const auto f = [x0](double x) {
        if (x == x0) ADD_FAILURE() << "evaluated at x0";
        return 2 * x;
    };
    EXPECT_NEAR(one_sided_limit(f, x0, Side::left, 1e-9), 0.6, 1e-9);
}

TEST(Derivative, TableEntries) {
    EXPECT_NEAR(derivative([](double x) { return std::atan(x); }, 1.0), 0.5, 1e-8);
    const double t = std::tan(0.5);
    EXPECT_NEAR(derivative([](double x) { return std::tan(x); }, 0.5), 1 + t * t, 1e-7);
    EXPECT_EQ(derivative([](double) { return 4.2; }, 3.0), 0.0);
    EXPECT_THROW(derivative([](double x) { return std::log(x); }, 0.0), DomainError);
}

TEST(Derivative, ErrorShrinksQuadraticallyWithStep) {
    const auto f = [](double x) { return std::sin(x); };
    const double exact = std::cos(1.0);
    const double e3 = std::abs(derivative(f, 1.0, {1e-3, false}) - exact);
    const double e4 = std::abs(derivative(f, 1.0, {1e-4, false}) - exact);
    EXPECT_GE(e3 / e4, 80.0);
    EXPECT_LE(e3 / e4, 120.0);
    // At h = 1e-5 truncation error (~1e-11) is near double rounding, so the
    // ratio is only checked loosely there.
    const double e5 = std::abs(derivative(f, 1.0, {1e-5, false}) - exact);
    EXPECT_LT(e5, e4);
}

TEST(Partial, Examples) {
    const auto f = [](const Vec& v) { return v[0] * v[0] * v[1]; };
    EXPECT_NEAR(partial_derivative(f, Vec{2, 3}, 0), 12.0, 1e-6);
    EXPECT_NEAR(partial_derivative([](const Vec& v) { return std::exp(v[0]); }, Vec{0.3, 9}, 1), 0.0, 1e-9);
    const auto sum = [](const Vec& v) { return v[0] + v[1]; };
    EXPECT_NEAR(partial_derivative(sum, Vec{-4, 7}, 0), 1.0, 1e-10);
    EXPECT_NEAR(partial_derivative(sum, Vec{-4, 7}, 1), 1.0, 1e-10);
    EXPECT_THROW(partial_derivative(sum, Vec{1, 2}, 2), DimensionError);
}

TEST(Gradient, QuadraticAndPartialConsistency) {
    const auto f = [](const Vec& v) { return v[0] * v[0] + v[1] * v[1]; };
    const Vec g = gradient(f, Vec{1, 2});
    EXPECT_NEAR(g[0], 2.0, 1e-9);
    EXPECT_NEAR(g[1], 4.0, 1e-9);

    testsupport::Rng rng(41);
    const auto h = [](const Vec& v) { return std::sin(v[0]) * std::exp(v[1]) + v[2] * v[0]; };
    for (int trial = 0; trial < 20; ++trial) {
        const Vec x = rng.vec(3, -2, 2);
        const Vec gr = gradient(h, x);
        for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(gr[i], partial_derivative(h, x, i));
    }
}

TEST(Jacobian, HandPartials) {
    const auto g = [](const Vec& v) { return Vec{v[0] * v[1], v[0] + v[1]}; };
    const Mat j = jacobian(g, Vec{2, 3});
    EXPECT_LE(testsupport::max_abs_diff(j, Mat{{3, 2}, {1, 1}}), 1e-9);
}

TEST(Jacobian, AffineMapsRecoverTheirMatrix) {
    testsupport::Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const auto n = static_cast<std::size_t>(rng.integer(1, 5));
        const auto m = static_cast<std::size_t>(rng.integer(1, 5));
        const Mat a = rng.mat(m, n, -3, 3);
        const Vec b = rng.vec(m);
        const Mat j = jacobian([&](const Vec& x) { return a * x + b; }, rng.vec(n, -5, 5));
        EXPECT_LE(testsupport::max_abs_diff(j, a), 1e-9);
    }
}

TEST(Hessian, QuadraticFormEverywhere) {
    const Mat q{{2, 1}, {1, 4}};
    const auto f = [&](const Vec& x) { return 0.5 * dot(x, q * x); };
    testsupport::Rng rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        const Mat h = hessian(f, rng.vec(2, -10, 10));
        EXPECT_LE(testsupport::max_abs_diff(h, q), 1e-4);
    }
}

TEST(Hessian, ExactlySymmetric) {
    testsupport::Rng rng(44);
    const auto f = [](const Vec& x) { return std::sin(x[0] * x[1]) + std::exp(x[2]) * x[0] + x[1] * x[1] * x[2]; };
    for (int trial = 0; trial < 20; ++trial) {
        const Mat h = hessian(f, rng.vec(3, -1, 1));
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(h(i, j), h(j, i));
    }
}
