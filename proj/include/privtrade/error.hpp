#pragma once

#include <stdexcept>
#include <string>

namespace privtrade {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A scenario parameter violates its range; carries the offending field name.
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Price at or above willingness-to-pay: demand vanishes and the optimum is l = 0.
class DegenerateScenario : public DomainError {
public:
    using DomainError::DomainError;
};

/// Operation called for a regime it does not cover.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Iterative method failed to converge.
class NumericFailure : public Error {
public:
    using Error::Error;
};

}  // namespace privtrade
