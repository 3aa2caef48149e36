#pragma once

// Bessel functions needed by the Helmholtz kernels: J0 and Y0 (pieces of the
// 2D Hankel function H0^(1) = J0 + i Y0) and K_j of integer order.
//
// Evaluation is delegated to Boost.Math; this header owns the contract:
// argument checking, range reporting and the documented accuracy.

#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/bessel.hpp>

#include "helmsplit/error.hpp"

namespace helmsplit::specfun {

struct SpecfunAccuracy {
    double rel_tol = 1e-13;

    constexpr bool valid() const { return rel_tol > 0.0 && rel_tol <= 1e-10; }
};

/// Accuracy every function in this header is tested against.
inline constexpr SpecfunAccuracy kAccuracy{};

/// Largest supported order of bessel_k.
inline constexpr int kMaxOrder = 64;

namespace detail {

inline void require_finite(double x, const char* fn) {
    if (!std::isfinite(x)) {
        throw DomainError(std::string(fn) + ": non-finite argument");
    }
}

template <class F>
double guarded(F&& f, const char* fn) {
    try {
        const double v = f();
        if (!std::isfinite(v)) {
            throw RangeError(std::string(fn) + ": result not representable");
        }
        return v;
    } catch (const std::overflow_error&) {
        throw RangeError(std::string(fn) + ": overflow");
    } catch (const std::domain_error& e) {
        throw DomainError(std::string(fn) + ": " + e.what());
    }
}

}  // namespace detail

inline double bessel_j0(double x) {
    detail::require_finite(x, "bessel_j0");
    if (x < 0.0) {
        throw DomainError("bessel_j0: negative argument");
    }
    return detail::guarded([x] { return boost::math::cyl_bessel_j(0, x); }, "bessel_j0");
}

inline double bessel_j1(double x) {
    detail::require_finite(x, "bessel_j1");
    if (x < 0.0) {
        throw DomainError("bessel_j1: negative argument");
    }
    return detail::guarded([x] { return boost::math::cyl_bessel_j(1, x); }, "bessel_j1");
}

/// Y0 has a logarithmic singularity at 0, so x must be strictly positive.
inline double bessel_y0(double x) {
    detail::require_finite(x, "bessel_y0");
    if (x <= 0.0) {
        throw DomainError("bessel_y0: argument must be positive");
    }
    return detail::guarded([x] { return boost::math::cyl_neumann(0, x); }, "bessel_y0");
}

inline double bessel_y1(double x) {
    detail::require_finite(x, "bessel_y1");
    if (x <= 0.0) {
        throw DomainError("bessel_y1: argument must be positive");
    }
    return detail::guarded([x] { return boost::math::cyl_neumann(1, x); }, "bessel_y1");
}

/// Modified Bessel function of the second kind K_j(x), 0 <= j <= kMaxOrder.
/// Tiny x with large j overflows; that is reported as RangeError.
inline double bessel_k(int j, double x) {
    detail::require_finite(x, "bessel_k");
    if (x <= 0.0) {
        throw DomainError("bessel_k: argument must be positive");
    }
    if (j < 0 || j > kMaxOrder) {
        throw DomainError("bessel_k: order outside [0, " + std::to_string(kMaxOrder) + "]");
    }
    return detail::guarded([j, x] { return boost::math::cyl_bessel_k(j, x); }, "bessel_k");
}

}  // namespace helmsplit::specfun
