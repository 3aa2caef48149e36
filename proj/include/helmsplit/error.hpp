#pragma once

#include <stdexcept>
#include <string>

namespace helmsplit {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function (r <= 0, x <= 0, NaN).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Result not representable in double precision.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Evaluation at the pole |p| = k of the Helmholtz symbol.
class PoleError : public Error {
public:
    using Error::Error;
};

/// Inconsistent or unsatisfiable configuration (parameters, plans, quadratures).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure did not reach its requested accuracy.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double achieved)
        : Error(what), achieved_(achieved) {}

    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// Root search found no crossing inside the search bracket.
class NoCrossingError : public Error {
public:
    using Error::Error;
};

/// Degenerate least-squares problem.
class FitError : public Error {
public:
    using Error::Error;
};

/// Grid does not resolve the wavenumber.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// Problem size above the brute-force budget.
class SizeError : public Error {
public:
    using Error::Error;
};

}  // namespace helmsplit
