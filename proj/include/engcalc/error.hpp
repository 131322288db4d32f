#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace engcalc {

// Root of every error the library throws. Each subclass corresponds to one
// failure category; callers (notably the CLI) map categories to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Text could not be tokenized or parsed. Carries the 0-based character offset.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " at offset " + std::to_string(position)), position_(position) {}

    [[nodiscard]] std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

// Structurally valid expression that cannot be evaluated (unbound name, unknown function).
class EvalError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class SingularityError : public Error {
public:
    using Error::Error;
};

// Input outside an operation's domain, or a non-finite value where a finite one is required.
class DomainError : public Error {
public:
    using Error::Error;
};

// Iteration budget exhausted, or an iteration diverged.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

} // namespace engcalc
