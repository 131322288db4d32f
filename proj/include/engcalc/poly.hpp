#pragma once

// Real polynomials in ascending-coefficient form and simultaneous
// (Durand-Kerner / Weierstrass) root finding.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "engcalc/error.hpp"

namespace engcalc {

using Complex = std::complex<double>;

// c[0] + c[1] s + ... + c[n] s^n. Exact zero high-order coefficients are
// dropped on construction. Sums additionally drop leading coefficients that
// cancelled to <= 1e-12 of the operands' largest coefficient. The zero
// polynomial has no coefficients and degree -1.
class Polynomial {
public:
    static constexpr double kTrimTolerance = 1e-12;

    Polynomial() = default;
    explicit Polynomial(std::vector<double> ascending) : c_(std::move(ascending)) {
        for (double x : c_) {
            if (!std::isfinite(x)) throw DomainError("Polynomial: non-finite coefficient");
        }
        trim(0.0);
    }
    Polynomial(std::initializer_list<double> ascending) : Polynomial(std::vector<double>(ascending)) {}

    static Polynomial constant(double k) { return Polynomial(std::vector<double>{k}); }
    // The monomial s^n.
    static Polynomial monomial(std::size_t n, double coeff = 1.0) {
        std::vector<double> c(n + 1, 0.0);
        c[n] = coeff;
        return Polynomial(std::move(c));
    }

    [[nodiscard]] int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    [[nodiscard]] bool is_zero() const noexcept { return c_.empty(); }
    [[nodiscard]] const std::vector<double>& coeffs() const noexcept { return c_; }
    // Coefficient of s^i; zero beyond the degree.
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0.0; }
    [[nodiscard]] double leading() const { return c_.empty() ? 0.0 : c_.back(); }

    [[nodiscard]] double max_abs_coeff() const noexcept {
        double m = 0.0;
        for (double x : c_) m = std::max(m, std::abs(x));
        return m;
    }

    // Horner evaluation.
    [[nodiscard]] Complex operator()(Complex s) const {
        Complex acc = 0.0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * s + *it;
        return acc;
    }
    [[nodiscard]] double operator()(double s) const {
        double acc = 0.0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * s + *it;
        return acc;
    }

    [[nodiscard]] Polynomial scaled(double k) const {
        std::vector<double> c = c_;
        for (double& x : c) x *= k;
        return Polynomial(std::move(c));
    }

    // Divides through by the leading coefficient.
    [[nodiscard]] Polynomial monic() const {
        if (is_zero()) throw DomainError("Polynomial: zero polynomial has no monic form");
        return scaled(1.0 / leading());
    }

    friend Polynomial operator+(const Polynomial& p, const Polynomial& q) {
        std::vector<double> c(std::max(p.c_.size(), q.c_.size()), 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = p[i] + q[i];
        Polynomial sum(std::move(c));
        sum.trim(kTrimTolerance * std::max(p.max_abs_coeff(), q.max_abs_coeff()));
        return sum;
    }
    friend Polynomial operator-(const Polynomial& p, const Polynomial& q) { return p + q.scaled(-1.0); }
    friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
        if (p.is_zero() || q.is_zero()) return {};
        std::vector<double> c(p.c_.size() + q.c_.size() - 1, 0.0);
        for (std::size_t i = 0; i < p.c_.size(); ++i)
            for (std::size_t j = 0; j < q.c_.size(); ++j) c[i + j] += p.c_[i] * q.c_[j];
        return Polynomial(std::move(c));
    }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    void trim(double tol) {
        while (!c_.empty() && !(std::abs(c_.back()) > tol)) c_.pop_back();
    }

    std::vector<double> c_;
};

inline Polynomial add(const Polynomial& p, const Polynomial& q) { return p + q; }
inline Polynomial mul(const Polynomial& p, const Polynomial& q) { return p * q; }
inline Complex eval(const Polynomial& p, Complex s) { return p(s); }

// `[c0,c1,...]`; the zero polynomial prints as `[0]`.
inline std::string to_string(const Polynomial& p) {
    if (p.is_zero()) return "[0]";
    return fmt::format("[{}]", fmt::join(p.coeffs(), ","));
}

struct RootResult {
    std::vector<Complex> roots;
    std::vector<double> residuals; // |p(root)| against the input polynomial
    int iterations = 0;
};

inline constexpr double kRootTolerance = 1e-12;
inline constexpr int kRootMaxIters = 500;

// All complex roots by simultaneous Weierstrass updates. Starting points sit on
// a circle of radius 1 + max|c_i / c_n|, rotated by 0.4 rad. Stops when the
// largest relative update is below tol, or when every iterate is a root of a
// polynomial within rounding of the input (the only attainable stop for
// clustered roots, which converge linearly to ~eps^(1/m) accuracy).
inline RootResult roots_dk(const Polynomial& p, double tol = kRootTolerance, int max_iters = kRootMaxIters) {
    if (p.degree() < 1) throw DomainError("roots_dk: need degree >= 1");
    const Polynomial m = p.monic();
    const auto n = static_cast<std::size_t>(m.degree());

    double radius = 0.0;
    for (std::size_t i = 0; i < n; ++i) radius = std::max(radius, std::abs(m[i]));
    radius += 1.0;

    std::vector<Complex> z(n);
    for (std::size_t k = 0; k < n; ++k) {
        z[k] = std::polar(radius, 0.4 + 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    }

    const auto backward_ok = [&](const Complex& x) {
        // Rounding bound for Horner on the monic polynomial.
        double bound = 0.0;
        double pw = 1.0;
        const double ax = std::abs(x);
        for (std::size_t i = 0; i <= n; ++i) {
            bound += std::abs(m[i]) * pw;
            pw *= ax;
        }
        return std::abs(m(x)) <= 8.0 * static_cast<double>(n + 1) * std::numeric_limits<double>::epsilon() * bound;
    };

    RootResult out;
    bool converged = false;
    for (int iter = 1; iter <= max_iters && !converged; ++iter) {
        double max_update = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            Complex denom = 1.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != k) denom *= z[k] - z[j];
            }
            if (denom == 0.0) denom = Complex(std::numeric_limits<double>::epsilon(), 0.0);
            const Complex delta = m(z[k]) / denom;
            z[k] -= delta;
            max_update = std::max(max_update, std::abs(delta) / std::max(1.0, std::abs(z[k])));
        }
        out.iterations = iter;
        converged = max_update < tol || std::all_of(z.begin(), z.end(), backward_ok);
    }
    if (!converged) {
        throw ConvergenceError("roots_dk: no convergence after " + std::to_string(max_iters) + " iterations");
    }
    out.roots = std::move(z);
    out.residuals.reserve(n);
    for (const Complex& r : out.roots) out.residuals.push_back(std::abs(p(r)));
    return out;
}

// Roots of a real polynomial with the real-coefficient structure restored:
// imaginary parts below 1e-8 snap to zero, the remaining roots are matched
// into exact conjugate pairs, and the list is sorted by (real, imag).
inline std::vector<Complex> real_poly_roots(const Polynomial& p, double tol = kRootTolerance,
                                            int max_iters = kRootMaxIters) {
    constexpr double kSnap = 1e-8;
    std::vector<Complex> roots = roots_dk(p, tol, max_iters).roots;
    std::vector<Complex> upper;
    std::vector<Complex> lower;
    std::vector<Complex> out;
    for (const Complex& r : roots) {
        if (std::abs(r.imag()) < kSnap) {
            out.emplace_back(r.real(), 0.0);
        } else {
            (r.imag() > 0 ? upper : lower).push_back(r);
        }
    }
    for (const Complex& u : upper) {
        if (lower.empty()) {
            out.push_back(u);
            continue;
        }
        auto best = std::min_element(lower.begin(), lower.end(), [&](const Complex& a, const Complex& b) {
            return std::abs(a - std::conj(u)) < std::abs(b - std::conj(u));
        });
        const double re = 0.5 * (u.real() + best->real());
        const double im = 0.5 * (u.imag() - best->imag());
        out.emplace_back(re, im);
        out.emplace_back(re, -im);
        lower.erase(best);
    }
    out.insert(out.end(), lower.begin(), lower.end());
    std::sort(out.begin(), out.end(), [](const Complex& a, const Complex& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return out;
}

} // namespace engcalc
