#pragma once

#include <cstdint>
#include <random>

#include "engcalc/linalg.hpp"

namespace testsupport {

// Seeded uniform draws for property tests.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

    engcalc::Vec vec(std::size_t n, double lo = -1.0, double hi = 1.0) {
        engcalc::Vec v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = uniform(lo, hi);
        return v;
    }

    engcalc::Mat mat(std::size_t r, std::size_t c, double lo = -1.0, double hi = 1.0) {
        engcalc::Mat m(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) m(i, j) = uniform(lo, hi);
        return m;
    }

    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
};

inline double max_abs_diff(const engcalc::Mat& a, const engcalc::Mat& b) { return engcalc::max_abs(a - b); }
inline double max_abs_diff(const engcalc::Vec& a, const engcalc::Vec& b) { return engcalc::norm_inf(a - b); }

} // namespace testsupport
