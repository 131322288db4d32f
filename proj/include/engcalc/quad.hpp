#pragma once

// Definite integration: Riemann/Darboux sums, composite trapezoid and Simpson,
// sampled-data integration, Type-I improper integrals, and geometric
// applications (path length, lamina mass properties, volumes of revolution).

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include "engcalc/error.hpp"
#include "engcalc/signal.hpp"

namespace engcalc::quad {

template <class F>
concept RealFunction = std::invocable<const F&, double> && std::convertible_to<std::invoke_result_t<const F&, double>, double>;

struct Interval {
    double a;
    double b;

    Interval(double lo, double hi) : a(lo), b(hi) {
        if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
            throw DomainError("Interval: need finite a < b");
        }
    }

    [[nodiscard]] double width() const noexcept { return b - a; }
};

namespace detail {

template <RealFunction F>
double eval(const F& f, double x, const char* op) {
    const double y = f(x);
    if (!std::isfinite(y)) {
        throw DomainError(std::string(op) + ": non-finite integrand at x = " + std::to_string(x));
    }
    return y;
}

inline void require_panels(std::size_t n, const char* op) {
    if (n < 1) throw DomainError(std::string(op) + ": need at least one panel");
}

} // namespace detail

enum class RiemannScheme { left, right, midpoint };

template <RealFunction F>
double riemann_sum(const F& f, const Interval& iv, std::size_t n, RiemannScheme scheme) {
    detail::require_panels(n, "riemann_sum");
    const double h = iv.width() / static_cast<double>(n);
    const double offset = scheme == RiemannScheme::left ? 0.0 : scheme == RiemannScheme::right ? 1.0 : 0.5;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += detail::eval(f, iv.a + (static_cast<double>(i) + offset) * h, "riemann_sum");
    }
    return sum * h;
}

struct DarbouxBounds {
    double lower;
    double upper;
};

// Per-panel inf/sup are approximated by the min/max over `m` evenly spaced
// subsamples that include both panel endpoints. Exact when f is monotone on
// every panel; otherwise the bracket may be slightly too narrow.
template <RealFunction F>
DarbouxBounds darboux_bounds(const F& f, const Interval& iv, std::size_t n, std::size_t m) {
    detail::require_panels(n, "darboux_bounds");
    if (m < 2) throw DomainError("darboux_bounds: need at least two subsamples per panel");
    const double h = iv.width() / static_cast<double>(n);
    DarbouxBounds out{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const double left = iv.a + static_cast<double>(i) * h;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t j = 0; j < m; ++j) {
            const double x = j + 1 == m ? iv.a + static_cast<double>(i + 1) * h
                                        : left + h * static_cast<double>(j) / static_cast<double>(m - 1);
            const double y = detail::eval(f, x, "darboux_bounds");
            lo = std::min(lo, y);
            hi = std::max(hi, y);
        }
        out.lower += lo;
        out.upper += hi;
    }
    out.lower *= h;
    out.upper *= h;
    return out;
}

template <RealFunction F>
double trapezoid(const F& f, const Interval& iv, std::size_t n) {
    detail::require_panels(n, "trapezoid");
    const double h = iv.width() / static_cast<double>(n);
    double sum = 0.5 * (detail::eval(f, iv.a, "trapezoid") + detail::eval(f, iv.b, "trapezoid"));
    for (std::size_t i = 1; i < n; ++i) sum += detail::eval(f, iv.a + static_cast<double>(i) * h, "trapezoid");
    return sum * h;
}

template <RealFunction F>
double simpson(const F& f, const Interval& iv, std::size_t n) {
    detail::require_panels(n, "simpson");
    if (n % 2 != 0) throw DomainError("simpson: panel count must be even, got " + std::to_string(n));
    const double h = iv.width() / static_cast<double>(n);
    double odd = 0.0;
    double even = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double y = detail::eval(f, iv.a + static_cast<double>(i) * h, "simpson");
        (i % 2 == 1 ? odd : even) += y;
    }
    const double ends = detail::eval(f, iv.a, "simpson") + detail::eval(f, iv.b, "simpson");
    return (ends + 4.0 * odd + 2.0 * even) * h / 3.0;
}

// Sum of 0.5 (y_k + y_{k+1}) (t_{k+1} - t_k); spacing need not be uniform.
inline double trapezoid_sampled(const SampledSignal& sig, std::size_t channel) {
    sig.check_channel(channel);
    sig.validate();
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < sig.size(); ++k) {
        sum += 0.5 * (sig.value(k, channel) + sig.value(k + 1, channel)) * (sig.time(k + 1) - sig.time(k));
    }
    return sum;
}

// Running integral from t_0; sample k holds the integral over [t_0, t_k].
inline SampledSignal cumulative_trapezoid(const SampledSignal& sig, std::size_t channel) {
    sig.check_channel(channel);
    sig.validate();
    SampledSignal out(1, {sig.names()[channel]});
    double sum = 0.0;
    out.push_back(sig.time(0), Vec{0.0});
    for (std::size_t k = 0; k + 1 < sig.size(); ++k) {
        sum += 0.5 * (sig.value(k, channel) + sig.value(k + 1, channel)) * (sig.time(k + 1) - sig.time(k));
        out.push_back(sig.time(k + 1), Vec{sum});
    }
    return out;
}

inline constexpr std::size_t kDefaultMaxDoublings = 20;

// Integral of f over [a, inf). The range doubles ([a, a+1], [a, a+2], [a, a+4], ...)
// with Simpson panels no wider than 1e-2; the newest slab is added to the
// running total, and iteration stops once a doubling changes the total by < tol.
template <RealFunction F>
double improper_type1(const F& f, double a, double tol, std::size_t max_doublings = kDefaultMaxDoublings) {
    if (!(tol > 0.0)) throw DomainError("improper_type1: tol must be positive");
    if (!std::isfinite(a)) throw DomainError("improper_type1: lower limit must be finite");
    constexpr double kMaxPanelWidth = 1e-2;
    const auto panels_for = [&](double width) {
        auto n = static_cast<std::size_t>(std::ceil(width / kMaxPanelWidth - 1e-9));
        n = std::max<std::size_t>(n, 2);
        return n + n % 2;
    };
    double total = simpson(f, Interval(a, a + 1.0), panels_for(1.0));
    double reach = 1.0;
    for (std::size_t k = 1; k <= max_doublings; ++k) {
        const double slab = simpson(f, Interval(a + reach, a + 2.0 * reach), panels_for(reach));
        total += slab;
        reach *= 2.0;
        if (std::abs(slab) < tol) return total;
    }
    throw ConvergenceError("improper_type1: no convergence after " + std::to_string(max_doublings) +
                           " doublings (divergent or slowly decaying integrand)");
}

// Integral over the whole real line, split at `split`.
template <RealFunction F>
double improper_whole_line(const F& f, double tol, double split = 0.0, std::size_t max_doublings = kDefaultMaxDoublings) {
    const double upper = improper_type1(f, split, tol, max_doublings);
    const double lower = improper_type1([&](double x) { return f(-x); }, -split, tol, max_doublings);
    return upper + lower;
}

// Arc length of the planar curve (fx(t), fy(t)). Derivatives are central
// differences with step (tf - t0) / (100 n); the integral is Simpson on n
// panels, n rounded up to even.
template <RealFunction FX, RealFunction FY>
double path_length(const FX& fx, const FY& fy, double t0, double tf, std::size_t n) {
    if (n < 2) throw DomainError("path_length: need n >= 2");
    n += n % 2;
    const Interval iv(t0, tf);
    const double h = iv.width() / (100.0 * static_cast<double>(n));
    const auto speed = [&](double t) {
        const double dx = (fx(t + h) - fx(t - h)) / (2.0 * h);
        const double dy = (fy(t + h) - fy(t - h)) / (2.0 * h);
        if (!std::isfinite(dx) || !std::isfinite(dy)) {
            throw DomainError("path_length: non-finite derivative at t = " + std::to_string(t));
        }
        return std::hypot(dx, dy);
    };
    return simpson(speed, iv, n);
}

// Planar body between g (below) and f (above) over [a, b], uniform density
// rho and thickness h.
struct Lamina {
    std::function<double(double)> f;
    std::function<double(double)> g;
    Interval interval;
    double rho;
    double h;

    // Throws DomainError unless rho, h > 0 and f >= g on a 1000-point grid.
    void validate() const {
        if (!(rho > 0.0) || !(h > 0.0)) throw DomainError("Lamina: rho and h must be positive");
        constexpr std::size_t kGrid = 1000;
        for (std::size_t i = 0; i < kGrid; ++i) {
            const double x = interval.a + interval.width() * static_cast<double>(i) / static_cast<double>(kGrid - 1);
            if (f(x) < g(x)) throw DomainError("Lamina: upper boundary below lower at x = " + std::to_string(x));
        }
    }
};

struct LaminaProperties {
    double mass;
    double centroid_x;
    double centroid_y;
    double Iz; // about the z-axis through the origin
};

inline LaminaProperties lamina_properties(const Lamina& lam, std::size_t n) {
    lam.validate();
    const double w = lam.interval.width() / static_cast<double>(n + n % 2);
    const auto height = [&](double x) {
        const double d = lam.f(x) - lam.g(x);
        if (d < 0.0) throw DomainError("lamina_properties: f < g at x = " + std::to_string(x));
        return d;
    };
    // Sweep the Simpson grid once so f < g is reported even where weights vanish.
    for (std::size_t i = 0; i <= n + n % 2; ++i) (void)height(lam.interval.a + static_cast<double>(i) * w);

    const double area = simpson(height, lam.interval, n);
    if (!(area > 0.0)) throw DomainError("lamina_properties: zero area");
    const double moment_x = simpson([&](double x) { return x * height(x); }, lam.interval, n);
    const double moment_y = simpson(
        [&](double x) {
            const double fx = lam.f(x);
            const double gx = lam.g(x);
            return 0.5 * (fx * fx - gx * gx);
        },
        lam.interval, n);
    const double iz = simpson(
        [&](double x) {
            const double fx = lam.f(x);
            const double gx = lam.g(x);
            return x * x * (fx - gx) + (fx * fx * fx - gx * gx * gx) / 3.0;
        },
        lam.interval, n);
    const double scale = lam.rho * lam.h;
    return {scale * area, moment_x / area, moment_y / area, scale * iz};
}

// Disk method about the x-axis: pi * integral of f^2.
template <RealFunction F>
double volume_of_revolution(const F& f, const Interval& iv, std::size_t n) {
    const auto squared = [&](double x) {
        const double y = f(x);
        if (y < 0.0) throw DomainError("volume_of_revolution: f < 0 at x = " + std::to_string(x));
        return y * y;
    };
    return std::numbers::pi * simpson(squared, iv, n);
}

namespace detail {

template <RealFunction F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                        int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = eval(f, lm, "antiderivative");
    const double frm = eval(f, rm, "antiderivative");
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

// F(x) = integral of f over [a, x] by adaptive Simpson (absolute target 1e-10).
// F(a) = 0 and F(x) = -integral over [x, a] for x < a.
template <RealFunction F>
std::function<double(double)> antiderivative_numeric(F f, double a) {
    constexpr double kTarget = 1e-10;
    constexpr int kMaxDepth = 40;
    return [f = std::move(f), a](double x) {
        if (x == a) return 0.0;
        const double lo = std::min(a, x);
        const double hi = std::max(a, x);
        const auto pieces = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil((hi - lo) / 0.25)));
        const double w = (hi - lo) / static_cast<double>(pieces);
        double total = 0.0;
        for (std::size_t i = 0; i < pieces; ++i) {
            const double p = lo + static_cast<double>(i) * w;
            const double q = i + 1 == pieces ? hi : p + w;
            const double fp = detail::eval(f, p, "antiderivative");
            const double fq = detail::eval(f, q, "antiderivative");
            const double fm = detail::eval(f, 0.5 * (p + q), "antiderivative");
            const double whole = (q - p) / 6.0 * (fp + 4.0 * fm + fq);
            total += detail::adaptive_simpson(f, p, q, fp, fm, fq, whole, kTarget / static_cast<double>(pieces),
                                              kMaxDepth);
        }
        return x > a ? total : -total;
    };
}

} // namespace engcalc::quad
