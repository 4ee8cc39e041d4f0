#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace quayside {

// Base for everything the library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid parameters or arguments outside an operation's domain.
struct DomainError : Error {
    using Error::Error;
};

// Malformed scenario files, literals, or observation files.
struct ParseError : Error {
    using Error::Error;
};

// A quantity the caller asked for has no stationary meaning (rho >= 1).
struct StationarityError : Error {
    using Error::Error;
};

// Numerical failures: non-convergence, singular denominators, overflow.
struct NumericError : Error {
    using Error::Error;
};

struct ConvergenceError : NumericError {
    ConvergenceError(const std::string& what, long double last_iterate, long double residual,
                     std::size_t iterations)
        : NumericError(what), last_iterate(last_iterate), residual(residual),
          iterations(iterations) {}

    long double last_iterate;
    long double residual;
    std::size_t iterations;
};

struct SingularityError : NumericError {
    using NumericError::NumericError;
};

struct InversionError : NumericError {
    using NumericError::NumericError;
};

struct OverflowError : NumericError {
    OverflowError(const std::string& what, std::size_t priority_class)
        : NumericError(what), priority_class(priority_class) {}

    std::size_t priority_class;  // 1-based
};

}  // namespace quayside
