#pragma once

// Time-stamped sample records and the repo-wide CSV format:
//   header `t,<name0>[,<name1>,...]`, `.` decimal point, one row per sample.

#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "engcalc/error.hpp"
#include "engcalc/linalg.hpp"

namespace engcalc {

class SampledSignal {
public:
    SampledSignal() = default;

    // Empty record with `dim` channels, named y0..y{dim-1} unless names are given.
    explicit SampledSignal(std::size_t dim, std::vector<std::string> names = {})
        : dim_(dim), names_(std::move(names)) {
        if (names_.empty()) {
            for (std::size_t i = 0; i < dim_; ++i) names_.push_back("y" + std::to_string(i));
        }
        if (names_.size() != dim_) throw DimensionError("SampledSignal: channel name count mismatch");
    }

    void push_back(double t, const Vec& y) {
        if (y.size() != dim_) throw DimensionError("SampledSignal: sample dimension mismatch");
        if (!std::isfinite(t) || !y.all_finite()) throw DomainError("SampledSignal: non-finite sample");
        if (!t_.empty() && !(t > t_.back())) throw DomainError("SampledSignal: timestamps must strictly increase");
        t_.push_back(t);
        data_.insert(data_.end(), y.begin(), y.end());
    }

    [[nodiscard]] std::size_t size() const noexcept { return t_.size(); }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] const std::vector<double>& times() const noexcept { return t_; }
    [[nodiscard]] double time(std::size_t k) const { return t_[k]; }
    [[nodiscard]] double value(std::size_t k, std::size_t channel) const { return data_[k * dim_ + channel]; }
    [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }

    [[nodiscard]] Vec sample(std::size_t k) const {
        Vec y(dim_);
        for (std::size_t c = 0; c < dim_; ++c) y[c] = value(k, c);
        return y;
    }

    [[nodiscard]] std::vector<double> channel(std::size_t c) const {
        check_channel(c);
        std::vector<double> out(size());
        for (std::size_t k = 0; k < size(); ++k) out[k] = value(k, c);
        return out;
    }

    void check_channel(std::size_t c) const {
        if (c >= dim_) {
            throw DimensionError("SampledSignal: channel " + std::to_string(c) + " out of range (dim " +
                                 std::to_string(dim_) + ")");
        }
    }

    // Throws unless the record satisfies the full invariant set (length >= 2).
    void validate() const {
        if (size() < 2) throw DomainError("SampledSignal: need at least two samples");
    }

    void rename(std::vector<std::string> names) {
        if (names.size() != dim_) throw DimensionError("SampledSignal: channel name count mismatch");
        names_ = std::move(names);
    }

private:
    std::size_t dim_ = 0;
    std::vector<std::string> names_;
    std::vector<double> t_;
    std::vector<double> data_;
};

// Side-by-side channels of signals sharing identical timestamps.
inline SampledSignal hstack(const std::vector<const SampledSignal*>& parts) {
    if (parts.empty()) throw DimensionError("hstack: nothing to stack");
    std::vector<std::string> names;
    for (const auto* p : parts) {
        if (p->times() != parts.front()->times()) throw DimensionError("hstack: timestamp mismatch");
        names.insert(names.end(), p->names().begin(), p->names().end());
    }
    SampledSignal out(names.size(), names);
    for (std::size_t k = 0; k < parts.front()->size(); ++k) {
        Vec row;
        for (const auto* p : parts) row = concat(row, p->sample(k));
        out.push_back(parts.front()->time(k), row);
    }
    return out;
}

// Shortest decimal text that reads back to the same double ("%.17g" trimmed by fmt).
inline std::string format_number(double x) { return fmt::format("{}", x); }

inline void write_csv(std::ostream& os, const SampledSignal& sig) {
    os << 't';
    for (const auto& n : sig.names()) os << ',' << n;
    os << '\n';
    for (std::size_t k = 0; k < sig.size(); ++k) {
        os << format_number(sig.time(k));
        for (std::size_t c = 0; c < sig.dim(); ++c) os << ',' << format_number(sig.value(k, c));
        os << '\n';
    }
}

inline void write_csv(const std::string& path, const SampledSignal& sig) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DomainError("cannot open '" + path + "' for writing");
    write_csv(os, sig);
}

namespace detail {

inline std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

inline std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline double parse_field(const std::string& text, std::size_t line_no) {
    const std::string s = trim(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (s.empty() || used != s.size() || !std::isfinite(v)) {
        throw DomainError("csv line " + std::to_string(line_no) + ": bad number '" + s + "'");
    }
    return v;
}

} // namespace detail

// Reads the shared CSV format. Errors name the offending 1-based line.
inline SampledSignal read_csv(std::istream& is) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(is, line)) throw DomainError("csv line 1: missing header");
    ++line_no;
    auto header = detail::split_commas(line);
    for (auto& h : header) h = detail::trim(h);
    if (header.size() < 2 || header.front() != "t") {
        throw DomainError("csv line 1: header must be 't,<channel>[,...]'");
    }
    std::vector<std::string> names(header.begin() + 1, header.end());
    SampledSignal sig(names.size(), names);
    while (std::getline(is, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_commas(line);
        if (fields.size() != header.size()) {
            throw DomainError("csv line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                              " fields, got " + std::to_string(fields.size()));
        }
        const double t = detail::parse_field(fields[0], line_no);
        Vec y(names.size());
        for (std::size_t c = 0; c < names.size(); ++c) y[c] = detail::parse_field(fields[c + 1], line_no);
        if (sig.size() > 0 && !(t > sig.times().back())) {
            throw DomainError("csv line " + std::to_string(line_no) + ": timestamps must strictly increase");
        }
        sig.push_back(t, y);
    }
    return sig;
}

inline SampledSignal read_csv(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DomainError("cannot open '" + path + "'");
    return read_csv(is);
}

} // namespace engcalc
