#pragma once

#include <stdexcept>
#include <string>

namespace crossing {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Model lacks a property the operation needs (e.g. finite third moment).
class UnsupportedModelError : public Error {
public:
    using Error::Error;
};

/// Bessel / GIG order without a supported evaluation path.
class UnsupportedOrderError : public Error {
public:
    using Error::Error;
};

/// Closed-form E^1 requested inside the near-critical band.
class NearCriticalError : public Error {
public:
    using Error::Error;
};

/// Root bracket could not be established.
class BracketError : public Error {
public:
    BracketError(const std::string& what, double lo, double hi, double f_lo, double f_hi)
        : Error(what), lo(lo), hi(hi), f_lo(f_lo), f_hi(f_hi) {}
    double lo, hi;
    double f_lo, f_hi;
};

/// Iterative solver stopped without meeting its residual tolerance.
class SolverError : public Error {
public:
    using Error::Error;
};

/// Series truncation or discretisation audit failed.
class AccuracyError : public Error {
public:
    using Error::Error;
};

/// Evaluation point outside a tabulated window.
class WindowError : public Error {
public:
    using Error::Error;
};

/// Requested table exceeds the configured memory budget.
class BudgetError : public Error {
public:
    using Error::Error;
};

/// Rate c is in the wrong regime for the operation.
class RegimeError : public Error {
public:
    using Error::Error;
};

/// dF/dy vanishes at the point of an implicit-function evaluation.
class SingularImplicitError : public Error {
public:
    using Error::Error;
};

}  // namespace crossing
