#pragma once

// Small dense real linear algebra: vectors, row-major matrices, LU with
// partial pivoting. Sized for n <= ~16; nothing here is blocked or vectorized.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "engcalc/error.hpp"

namespace engcalc {

namespace detail {

inline void require_finite(std::span<const double> xs, const char* what) {
    for (double x : xs) {
        if (!std::isfinite(x)) {
            throw DomainError(std::string(what) + ": non-finite entry");
        }
    }
}

} // namespace detail

class Vec {
public:
    Vec() = default;
    explicit Vec(std::size_t n, double fill = 0.0) : data_(n, fill) {}
    Vec(std::initializer_list<double> xs) : data_(xs) { detail::require_finite(data_, "Vec"); }
    explicit Vec(std::vector<double> xs) : data_(std::move(xs)) { detail::require_finite(data_, "Vec"); }

    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    [[nodiscard]] std::span<const double> span() const noexcept { return data_; }
    [[nodiscard]] std::span<double> span() noexcept { return data_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return data_; }

    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    [[nodiscard]] bool all_finite() const {
        return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
    }

    static Vec unit(std::size_t n, std::size_t i) {
        Vec e(n);
        e[i] = 1.0;
        return e;
    }

    Vec& operator+=(const Vec& o) {
        check_same(o, "Vec +=");
        for (std::size_t i = 0; i < size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        check_same(o, "Vec -=");
        for (std::size_t i = 0; i < size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (double& x : data_) x *= s;
        return *this;
    }

    friend bool operator==(const Vec&, const Vec&) = default;

private:
    void check_same(const Vec& o, const char* op) const {
        if (o.size() != size()) {
            throw DimensionError(std::string(op) + ": length " + std::to_string(size()) + " vs " +
                                 std::to_string(o.size()));
        }
    }

    std::vector<double> data_;
};

inline Vec operator+(Vec a, const Vec& b) { return a += b; }
inline Vec operator-(Vec a, const Vec& b) { return a -= b; }
inline Vec operator*(Vec a, double s) { return a *= s; }
inline Vec operator*(double s, Vec a) { return a *= s; }
inline Vec operator-(Vec a) { return a *= -1.0; }

inline double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

inline double norm_inf(const Vec& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double norm2(const Vec& v) { return std::sqrt(dot(v, v)); }

// Concatenation [a; b].
inline Vec concat(const Vec& a, const Vec& b) {
    Vec out(a.size() + b.size());
    std::copy(a.begin(), a.end(), out.begin());
    std::copy(b.begin(), b.end(), out.begin() + static_cast<std::ptrdiff_t>(a.size()));
    return out;
}

inline Vec slice(const Vec& v, std::size_t first, std::size_t count) {
    if (first + count > v.size()) throw DimensionError("slice: out of range");
    Vec out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = v[first + i];
    return out;
}

class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    // Row-major entries; entries.size() must equal rows * cols.
    Mat(std::size_t rows, std::size_t cols, std::vector<double> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (data_.size() != rows_ * cols_) {
            throw DimensionError("Mat: " + std::to_string(data_.size()) + " entries for " + std::to_string(rows_) +
                                 "x" + std::to_string(cols_));
        }
        detail::require_finite(data_, "Mat");
    }

    Mat(std::initializer_list<std::initializer_list<double>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw DimensionError("Mat: ragged initializer");
            data_.insert(data_.end(), r.begin(), r.end());
        }
        detail::require_finite(data_, "Mat");
    }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Mat diag(const Vec& d) {
        Mat m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    static Mat column(const Vec& v) { return Mat(v.size(), 1, v.values()); }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<const double> entries() const noexcept { return data_; }

    [[nodiscard]] Vec row(std::size_t i) const {
        Vec r(cols_);
        for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
        return r;
    }
    [[nodiscard]] Vec col(std::size_t j) const {
        Vec c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }
    void set_col(std::size_t j, const Vec& c) {
        if (c.size() != rows_) throw DimensionError("set_col: length mismatch");
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
    }

    [[nodiscard]] bool all_finite() const {
        return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
    }

    Mat& operator+=(const Mat& o) {
        check_same(o, "Mat +=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    Mat& operator-=(const Mat& o) {
        check_same(o, "Mat -=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    Mat& operator*=(double s) {
        for (double& x : data_) x *= s;
        return *this;
    }

    friend bool operator==(const Mat&, const Mat&) = default;

private:
    void check_same(const Mat& o, const char* op) const {
        if (o.rows_ != rows_ || o.cols_ != cols_) throw DimensionError(std::string(op) + ": shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline Mat operator+(Mat a, const Mat& b) { return a += b; }
inline Mat operator-(Mat a, const Mat& b) { return a -= b; }
inline Mat operator*(Mat a, double s) { return a *= s; }
inline Mat operator*(double s, Mat a) { return a *= s; }

inline Mat matmul(const Mat& a, const Mat& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " times " +
                             std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
    Mat c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

inline Mat operator*(const Mat& a, const Mat& b) { return matmul(a, b); }

inline Vec matvec(const Mat& a, const Vec& x) {
    if (a.cols() != x.size()) throw DimensionError("matvec: shape mismatch");
    Vec y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

inline Vec operator*(const Mat& a, const Vec& x) { return matvec(a, x); }

inline Mat transpose(const Mat& a) {
    Mat t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

// Maximum absolute row sum.
inline double norm_inf(const Mat& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += std::abs(a(i, j));
        m = std::max(m, s);
    }
    return m;
}

// Largest absolute entry; used for elementwise comparisons in tests and checks.
inline double max_abs(const Mat& a) {
    double m = 0.0;
    for (double x : a.entries()) m = std::max(m, std::abs(x));
    return m;
}

inline double trace(const Mat& a) {
    if (!a.square()) throw DimensionError("trace: matrix not square");
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, i);
    return s;
}

// Row-pivoted LU factors packed in one matrix (unit lower triangle implied).
class LuDecomposition {
public:
    static constexpr double kPivotTolerance = 1e-12;

    explicit LuDecomposition(Mat a) : lu_(std::move(a)) {
        if (!lu_.square()) throw DimensionError("lu: matrix not square");
        const std::size_t n = lu_.rows();
        const double threshold = kPivotTolerance * norm_inf(lu_);
        perm_.resize(n);
        std::iota(perm_.begin(), perm_.end(), std::size_t{0});
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t p = k;
            for (std::size_t i = k + 1; i < n; ++i) {
                if (std::abs(lu_(i, k)) > std::abs(lu_(p, k))) p = i;
            }
            // Negated comparison so that an all-zero matrix (threshold 0) is caught too.
            if (!(std::abs(lu_(p, k)) > threshold)) {
                throw SingularityError("lu: pivot " + std::to_string(k) + " below tolerance");
            }
            if (p != k) {
                for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
                std::swap(perm_[k], perm_[p]);
                sign_ = -sign_;
            }
            for (std::size_t i = k + 1; i < n; ++i) {
                const double l = lu_(i, k) / lu_(k, k);
                lu_(i, k) = l;
                for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= l * lu_(k, j);
            }
        }
    }

    [[nodiscard]] Vec solve(const Vec& b) const {
        const std::size_t n = lu_.rows();
        if (b.size() != n) throw DimensionError("lu_solve: rhs length mismatch");
        Vec x(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = b[perm_[i]];
            for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
            x[i] = s;
        }
        for (std::size_t i = n; i-- > 0;) {
            double s = x[i];
            for (std::size_t j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
            x[i] = s / lu_(i, i);
        }
        return x;
    }

    [[nodiscard]] double determinant() const {
        double d = sign_;
        for (std::size_t i = 0; i < lu_.rows(); ++i) d *= lu_(i, i);
        return d;
    }

    // Diagonal of U; all positive for a symmetric positive definite input.
    [[nodiscard]] Vec pivots() const {
        Vec p(lu_.rows());
        for (std::size_t i = 0; i < lu_.rows(); ++i) p[i] = lu_(i, i);
        return p;
    }

    [[nodiscard]] const std::vector<std::size_t>& permutation() const noexcept { return perm_; }

private:
    Mat lu_;
    std::vector<std::size_t> perm_;
    double sign_ = 1.0;
};

inline Vec lu_solve(const Mat& a, const Vec& b) {
    if (!a.square()) throw DimensionError("lu_solve: matrix not square");
    if (a.rows() != b.size()) throw DimensionError("lu_solve: rhs length mismatch");
    return LuDecomposition(a).solve(b);
}

// Determinant via LU; returns 0 for matrices the factorization rejects as singular.
inline double determinant(const Mat& a) {
    if (!a.square()) throw DimensionError("determinant: matrix not square");
    try {
        return LuDecomposition(a).determinant();
    } catch (const SingularityError&) {
        return 0.0;
    }
}

} // namespace engcalc
