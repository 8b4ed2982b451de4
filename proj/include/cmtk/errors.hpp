#pragma once

#include <stdexcept>
#include <string>

namespace cmtk {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Requested depth or index exceeds the available data.
class InsufficientData : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation (negative lambda, open-at-zero handle, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed textual input; the message names the offending line or field.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Moment fit residual exceeded the representability threshold.
class NotRepresentable : public Error {
public:
    NotRepresentable(const std::string& what, double residual) : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// A function handle exhausted its evaluation budget.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

}  // namespace cmtk
