#pragma once

#include <stdexcept>
#include <string>

namespace cheby {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept = 0;
};

/// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "DomainError"; }
};

/// Adaptive refinement exhausted its budget before meeting the tolerance.
class NonConvergence : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "NonConvergence"; }
};

/// A ratio was requested whose denominator vanishes (e.g. a constant function).
class DegenerateInput : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "DegenerateInput"; }
};

}  // namespace cheby
