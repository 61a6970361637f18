#pragma once

#include <stdexcept>
#include <string>

namespace zetalab {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A table or enumeration would exceed its size contract.
class SizeError : public Error {
public:
    using Error::Error;
};

/// Argument outside the double-precision validity window.
class PrecisionError : public Error {
public:
    using Error::Error;
};

/// Configuration or input validation failure (CLI exit code 1).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// An internal invariant was broken; indicates a bug, not bad input.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// Quadrature did not reach its tolerance within the panel budget.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double partial_value, double error_estimate)
        : Error(what), partial_value_(partial_value), error_estimate_(error_estimate) {}

    double partial_value() const noexcept { return partial_value_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double partial_value_;
    double error_estimate_;
};

}  // namespace zetalab
