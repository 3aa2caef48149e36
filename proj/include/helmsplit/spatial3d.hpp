#pragma once

// Closed-form 3D kernels of the split Helmholtz Green's function:
//
//   g_n(r, k) = e^{-kr} / (4 pi r) * P_n(kr)          non-oscillatory, 1/r singular
//   q_n(r, k) = cos(kr) / (4 pi r) - g_n(r, k)        real part of the oscillatory
//                                                      component, C^{2n-2} at r = 0

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "helmsplit/error.hpp"
#include "helmsplit/kernel_params.hpp"
#include "helmsplit/series.hpp"

namespace helmsplit::spatial3d {

using series::Rational;
using series::RationalSeries;

/// q_n(r, k) = (k / 4 pi) * sum_j coeffs[j] (kr)^j + O((kr)^{order+1})
struct SeriesExpansion3D {
    int n = 1;
    int order = 0;
    RationalSeries coeffs;
};

struct SupportFit {
    double c1 = 0.0;
    double c2 = 0.0;
    double max_rel_residual = 0.0;
};

struct SupportEstimate {
    double epsilon = 0.0;
    std::vector<std::pair<double, double>> radii;  ///< (k, r_eps)
    SupportFit fit;
};

/// Coefficients of P_n in (kr); P_n(0) = 1 and deg P_n = n - 1.
inline RationalSeries g_n_polynomial(int n) {
    if (n < 1) {
        throw DomainError("g_n_polynomial: n must be >= 1");
    }
    using series::factorial;
    RationalSeries c(static_cast<std::size_t>(n), Rational(0));
    c[0] = 1;
    for (int j = 1; j < n; ++j) {
        const Rational outer = Rational(1) / Rational(factorial(j) << (j - 1));
        for (int m = 0; m < j; ++m) {
            const Rational inner = Rational(factorial(2 * j - m - 2) << m) /
                                   Rational(factorial(m) * factorial(j - m - 1));
            c[m + 1] += outer * inner;
        }
    }
    return c;
}

/// Exact Taylor coefficients of q_n at r = 0 through (kr)^order.
inline SeriesExpansion3D taylor_q_n(int n, int order) {
    if (n < 1) {
        throw DomainError("taylor_q_n: n must be >= 1");
    }
    if (order < 2 * n) {
        throw DomainError("taylor_q_n: order must be >= 2n");
    }
    const auto len = static_cast<std::size_t>(order + 1);
    // cos x - e^{-x} P_n(x) through x^{order+1}, then divide by x.
    const RationalSeries decay = series::multiply(series::exp_neg(len), g_n_polynomial(n), len);
    const RationalSeries cosine = series::cos_series(len);
    SeriesExpansion3D out{n, order, RationalSeries(len)};
    for (std::size_t j = 0; j < len; ++j) {
        out.coeffs[j] = cosine[j + 1] - decay[j + 1];
    }
    return out;
}

namespace detail {

inline const std::vector<double>& polynomial_double(int n) {
    static series::LazyTable table;
    return table.get(n, [](int i) { return series::to_double(g_n_polynomial(i)); });
}

inline const std::vector<double>& q_series_double(int n) {
    static series::LazyTable table;
    return table.get(n, [](int i) {
        return series::to_double(taylor_q_n(i, std::max(30, 2 * i + 10)).coeffs);
    });
}

inline void check_params(const KernelParams& params, const char* fn) {
    params.validate();
    if (params.d != 3) {
        throw ConfigError(std::string(fn) + ": requires d = 3");
    }
}

inline void check_radius(double r, const char* fn) {
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw DomainError(std::string(fn) + ": r must be positive and finite");
    }
}

}  // namespace detail

/// Below this kr the series branch of q_n replaces cos/(4 pi r) - g_n.
inline constexpr double kSeriesThreshold = 0.1;

inline double g_n_3d(double r, const KernelParams& params) {
    detail::check_params(params, "g_n_3d");
    detail::check_radius(r, "g_n_3d");
    const double x = params.k * r;
    return std::exp(-x) / (4.0 * M_PI * r) * series::horner(detail::polynomial_double(params.n), x);
}

/// q_n evaluated by the truncated exact series (valid for small kr).
inline double q_n_3d_series(double r, const KernelParams& params) {
    detail::check_params(params, "q_n_3d_series");
    if (!(r >= 0.0)) {
        throw DomainError("q_n_3d_series: r must be >= 0");
    }
    return params.k / (4.0 * M_PI) * series::horner(detail::q_series_double(params.n), params.k * r);
}

inline double q_n_3d_direct(double r, const KernelParams& params) {
    detail::check_params(params, "q_n_3d_direct");
    detail::check_radius(r, "q_n_3d_direct");
    return std::cos(params.k * r) / (4.0 * M_PI * r) - g_n_3d(r, params);
}

/// q_n(r); at r = 0 returns the continuous limit (k / 4 pi) c_0.
inline double q_n_3d(double r, const KernelParams& params) {
    detail::check_params(params, "q_n_3d");
    if (!(r >= 0.0) || !std::isfinite(r)) {
        throw DomainError("q_n_3d: r must be finite and >= 0");
    }
    if (params.k * r < kSeriesThreshold) {
        return q_n_3d_series(r, params);
    }
    return q_n_3d_direct(r, params);
}

/// Outermost radius with g_n(r, k) = epsilon, searched on [1/k, inf).
///
/// For kr >= n - 1 the kernel is strictly decreasing, so the outer crossing
/// is bracketed either beyond that point or by a geometric scan inward.
inline double support_radius(const KernelParams& params, double epsilon) {
    detail::check_params(params, "support_radius");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw DomainError("support_radius: epsilon must be positive");
    }
    const double k = params.k;
    auto above = [&](double r) { return g_n_3d(r, params) >= epsilon; };
    const double r_start = 1.0 / k;
    if (!above(r_start)) {
        throw NoCrossingError("support_radius: epsilon exceeds g_n on the search bracket [1/k, inf)");
    }
    const double r_mono = std::max(r_start, (params.n - 1) / k);
    double lo;
    double hi;
    if (above(r_mono)) {
        lo = r_mono;
        hi = 2.0 * r_mono;
        while (above(hi)) {
            lo = hi;
            hi *= 2.0;
            if (!std::isfinite(hi)) {
                throw NoCrossingError("support_radius: no crossing found");
            }
        }
    } else {
        hi = r_mono;
        lo = hi / 1.01;
        while (!above(lo)) {
            hi = lo;
            lo /= 1.01;
        }
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        (above(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Least-squares fit of r k = c1 + c2 log10 k.
inline SupportFit support_fit(const std::vector<std::pair<double, double>>& estimates) {
    if (estimates.size() < 3) {
        throw FitError("support_fit: need at least 3 samples");
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double m = static_cast<double>(estimates.size());
    for (const auto& [k, r] : estimates) {
        if (!(k > 0.0) || !(r > 0.0)) {
            throw FitError("support_fit: samples must be positive");
        }
        const double x = std::log10(k);
        const double y = r * k;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double det = m * sxx - sx * sx;
    if (!(std::abs(det) > 1e-12 * m * sxx)) {
        throw FitError("support_fit: degenerate design (k values not distinct)");
    }
    SupportFit fit;
    fit.c2 = (m * sxy - sx * sy) / det;
    fit.c1 = (sy - fit.c2 * sx) / m;
    for (const auto& [k, r] : estimates) {
        const double y = r * k;
        const double model = fit.c1 + fit.c2 * std::log10(k);
        fit.max_rel_residual = std::max(fit.max_rel_residual, std::abs(model - y) / std::abs(y));
    }
    return fit;
}

/// Support radii over a list of wavenumbers for one epsilon, plus their fit.
inline SupportEstimate support_sweep(int n, double epsilon, const std::vector<double>& ks) {
    SupportEstimate est;
    est.epsilon = epsilon;
    for (double k : ks) {
        est.radii.emplace_back(k, support_radius(make_params(k, n, 3), epsilon));
    }
    est.fit = support_fit(est.radii);
    return est;
}

}  // namespace helmsplit::spatial3d
