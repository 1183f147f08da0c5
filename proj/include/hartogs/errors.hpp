#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hartogs {

/// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad user input: unknown profile, malformed expression or config, invalid flags.
class InputError : public Error {
public:
    using Error::Error;
};

/// Expression text that does not parse. Carries the byte offset of the offending token.
class SyntaxError : public InputError {
public:
    SyntaxError(const std::string& what, std::size_t offset)
        : InputError(what + " (offset " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Argument outside the mathematical domain: point not in the Hartogs domain,
/// t outside [0, x0), log of a non-positive value, and so on.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Finite result does not exist in double precision (e.g. exp of a huge value).
/// Kept separate from DomainError so callers can tell the two apart.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// The weighted Bergman space is trivial (weight m <= dimension n).
class TrivialSpaceError : public Error {
public:
    TrivialSpaceError(int m, int n)
        : Error("weighted Bergman space is trivial for m = " + std::to_string(m) +
                ", n = " + std::to_string(n) + " (requires m > n)") {}
};

/// A numerical procedure did not converge. Carries the partial result and the
/// error estimate at the point of failure so callers can audit.
class NumericalFailure : public Error {
public:
    explicit NumericalFailure(const std::string& what, double partial = 0.0,
                              double error_estimate = 0.0)
        : Error(what), partial_(partial), error_estimate_(error_estimate) {}

    double partial() const { return partial_; }
    double error_estimate() const { return error_estimate_; }

private:
    double partial_;
    double error_estimate_;
};

/// An integrand (or other user callback) produced NaN or a hard failure.
class EvaluationError : public Error {
public:
    using Error::Error;
};

} // namespace hartogs
