#pragma once

#include <stdexcept>
#include <string>

namespace kovtop {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters or an inadmissible input value.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A point lies outside the coordinate domain of a formula
/// (x1 x2 = 0, a vanishing denominator, a non-realizable chart).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A square root of a negative quantity was requested where the formula
/// only makes sense for a nonnegative radicand.
class NegativeRadicand : public DomainError {
public:
    NegativeRadicand(const std::string& what, double radicand)
        : DomainError(what), radicand_(radicand) {}
    double radicand() const { return radicand_; }

private:
    double radicand_;
};

/// Failure inside the ODE integrator (step underflow, runaway drift).
class IntegrationError : public Error {
public:
    using Error::Error;
};

}  // namespace kovtop
