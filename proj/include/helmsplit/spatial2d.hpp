#pragma once

// Closed-form 2D kernels:
//
//   h_n(r, k) = (1 / 2 pi) sum_{j<n} (kr)^j / j! K_j(kr)       non-oscillatory, log singular
//   v_n(r, k) = -Y0(kr) / 4 - h_n(r, k)                         C^{2n} at r = 0
//
// Taylor coefficients of v_n live in the ring Q + Q gamma + Q log 2 + Q log(kr)
// (gamma = Euler's constant), with an overall factor 1/pi.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "helmsplit/error.hpp"
#include "helmsplit/fourier_kernels.hpp"
#include "helmsplit/kernel_params.hpp"
#include "helmsplit/quadrature.hpp"
#include "helmsplit/series.hpp"
#include "helmsplit/specfun.hpp"

namespace helmsplit::spatial2d {

using series::Integer;
using series::Rational;

inline constexpr double kEulerGamma = 0.5772156649015329;

/// a + b gamma + c log 2 + L log(kr), all exact rationals.
struct RingCoefficient {
    Rational a = 0;
    Rational b = 0;
    Rational c = 0;
    Rational L = 0;

    RingCoefficient& operator+=(const RingCoefficient& o) {
        a += o.a;
        b += o.b;
        c += o.c;
        L += o.L;
        return *this;
    }

    friend bool operator==(const RingCoefficient&, const RingCoefficient&) = default;

    bool is_zero() const { return a == 0 && b == 0 && c == 0 && L == 0; }

    double evaluate(double log_x) const {
        return a.convert_to<double>() + b.convert_to<double>() * kEulerGamma +
               c.convert_to<double>() * M_LN2 + L.convert_to<double>() * log_x;
    }
};

/// v_n(r, k) = (1/pi) sum_p coeffs[p] (kr)^p + O((kr)^{order+1} log(kr))
struct SeriesExpansion2D {
    int n = 1;
    int order = 0;
    std::vector<RingCoefficient> coeffs;
};

/// Exact ring coefficients of v_n through (kr)^order, built from the
/// small-argument series of Y0 and x^j K_j(x).
inline SeriesExpansion2D taylor_v_n(int n, int order) {
    if (n < 1) {
        throw DomainError("taylor_v_n: n must be >= 1");
    }
    if (order < 2 * n) {
        throw DomainError("taylor_v_n: order must be >= 2n");
    }
    using series::factorial;
    using series::harmonic;
    SeriesExpansion2D out{n, order, std::vector<RingCoefficient>(static_cast<std::size_t>(order + 1))};
    auto at = [&](int power) -> RingCoefficient* {
        return power <= order ? &out.coeffs[static_cast<std::size_t>(power)] : nullptr;
    };
    const Rational half(1, 2);

    // -Y0(x)/4 = (1/pi)(-1/2)[(log x - log 2 + gamma) J0(x) + sum_{m>=1} (-1)^{m+1} H_m (x^2/4)^m / (m!)^2]
    for (int m = 0; 2 * m <= order; ++m) {
        const Integer fm = factorial(m);
        const Rational j0 = Rational((m % 2 == 0) ? 1 : -1) / Rational((Integer(1) << (2 * m)) * fm * fm);
        RingCoefficient term;
        term.L = -half * j0;
        term.c = half * j0;
        term.b = -half * j0;
        if (m >= 1) {
            const Rational y = Rational((m % 2 == 1) ? 1 : -1) * harmonic(m) /
                               Rational((Integer(1) << (2 * m)) * fm * fm);
            term.a = -half * y;
        }
        *at(2 * m) += term;
    }

    // -(1/2pi) sum_{j<n} x^j K_j(x) / j!  =  (1/pi)(-1/(2 j!)) x^j K_j(x)
    for (int j = 0; j < n; ++j) {
        const Rational scale = Rational(-1) / Rational(2 * factorial(j));
        // polar part: 2^{j-1} sum_{m<j} (j-m-1)!/m! (-1)^m x^{2m} / 4^m
        for (int m = 0; m < j && 2 * m <= order; ++m) {
            const Rational v = Rational(factorial(j - m - 1) << (j - 1)) /
                               Rational(factorial(m) * (Integer(1) << (2 * m))) *
                               Rational((m % 2 == 0) ? 1 : -1);
            RingCoefficient term;
            term.a = scale * v;
            *at(2 * m) += term;
        }
        // (-1)^{j+1} log(x/2) x^j I_j(x)  and  (-1)^j/2 sum (H_m + H_{m+j} - 2 gamma) x^{2m+2j} / (2^{2m+j} m! (m+j)!)
        const int sign_log = (j % 2 == 1) ? 1 : -1;
        const int sign_psi = (j % 2 == 0) ? 1 : -1;
        for (int m = 0; 2 * m + 2 * j <= order; ++m) {
            const Rational base = Rational(1) / Rational((Integer(1) << (2 * m + j)) * factorial(m) * factorial(m + j));
            RingCoefficient term;
            term.L = scale * sign_log * base;
            term.c = -scale * sign_log * base;
            term.a = scale * sign_psi * half * (harmonic(m) + harmonic(m + j)) * base;
            term.b = scale * sign_psi * half * Rational(-2) * base;
            *at(2 * m + 2 * j) += term;
        }
    }
    return out;
}

namespace detail {

inline void check_params(const KernelParams& params, const char* fn) {
    params.validate();
    if (params.d != 2) {
        throw ConfigError(std::string(fn) + ": requires d = 2");
    }
}

inline void check_radius(double r, const char* fn) {
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw DomainError(std::string(fn) + ": r must be positive and finite");
    }
}

struct SeriesTable {
    const std::vector<double>& plain;  ///< rational + gamma + log 2 parts collapsed
    const std::vector<double>& log;    ///< coefficients of log(kr)
};

inline SeriesTable v_series_double(int n) {
    static series::LazyTable plain_part;
    static series::LazyTable log_part;
    auto build = [](int i, bool log) {
        const auto s = taylor_v_n(i, std::max(30, 2 * i + 10));
        std::vector<double> out;
        for (const auto& c : s.coeffs) {
            out.push_back(log ? c.L.convert_to<double>() : c.evaluate(0.0));
        }
        return out;
    };
    return {plain_part.get(n, [&](int i) { return build(i, false); }),
            log_part.get(n, [&](int i) { return build(i, true); })};
}

}  // namespace detail

inline constexpr double kSeriesThreshold = 0.1;

/// sum_{j<n} x^j K_j(x) / j!  via upward recurrence on x^j K_j, free of overflow.
inline double scaled_k_sum(int n, double x) {
    const double k0 = specfun::bessel_k(0, x);
    if (n == 1) {
        return k0;
    }
    double prev = k0;                            // x^0 K_0 / 0!
    double cur = x * specfun::bessel_k(1, x);    // x^1 K_1 / 1!
    double sum = prev + cur;
    const double x2 = x * x;
    for (int j = 1; j + 1 < n; ++j) {
        // b_{j+1} = x^2 b_{j-1} + 2j b_j with b_j = j! c_j
        const double next = (x2 * prev / j + 2.0 * j * cur) / (j + 1);
        sum += next;
        prev = cur;
        cur = next;
    }
    return sum;
}

inline double h_n_2d(double r, const KernelParams& params) {
    detail::check_params(params, "h_n_2d");
    detail::check_radius(r, "h_n_2d");
    return scaled_k_sum(params.n, params.k * r) / (2.0 * M_PI);
}

/// v_n by the truncated ring series (small kr), gamma and log 2 substituted numerically.
inline double v_n_2d_series(double r, const KernelParams& params) {
    detail::check_params(params, "v_n_2d_series");
    if (!(r >= 0.0)) {
        throw DomainError("v_n_2d_series: r must be >= 0");
    }
    const double x = params.k * r;
    const auto t = detail::v_series_double(params.n);
    const double plain = series::horner(t.plain, x);
    const double log_part = (x > 0.0) ? series::horner(t.log, x) * std::log(x) : 0.0;
    return (plain + log_part) / M_PI;
}

inline double v_n_2d_direct(double r, const KernelParams& params) {
    detail::check_params(params, "v_n_2d_direct");
    detail::check_radius(r, "v_n_2d_direct");
    return -0.25 * specfun::bessel_y0(params.k * r) - h_n_2d(r, params);
}

/// v_n(r); r = 0 gives the continuous limit.
inline double v_n_2d(double r, const KernelParams& params) {
    detail::check_params(params, "v_n_2d");
    if (!(r >= 0.0) || !std::isfinite(r)) {
        throw DomainError("v_n_2d: r must be finite and >= 0");
    }
    if (params.k * r < kSeriesThreshold) {
        return v_n_2d_series(r, params);
    }
    return v_n_2d_direct(r, params);
}

/// h_n by quadrature of its Hankel-transform integral
///   (1/2pi) int_0^inf ghat_n(p) J0(pr) p dp,
/// independent of the Bessel-K closed form. Throws AccuracyError on
/// non-convergence.
inline double h_n_transform_check(double r, const KernelParams& params, double quad_tol = 1e-11) {
    detail::check_params(params, "h_n_transform_check");
    detail::check_radius(r, "h_n_transform_check");
    auto integrand = [&](double p) {
        return fourier::symbol_nonoscillatory(p, params) * specfun::bessel_j0(p * r) * p;
    };
    // J0(pr) has zeros near (m - 1/4) pi / r; panels of width pi / r alternate in sign.
    const auto res = quad::oscillatory_half_line(integrand, 0.75 * M_PI / r, M_PI / r, quad_tol);
    return res.value / (2.0 * M_PI);
}

}  // namespace helmsplit::spatial2d
