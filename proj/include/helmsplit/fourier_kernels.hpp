#pragma once

// Fourier-domain side of the split of the Helmholtz symbol 1/(p^2 - k^2):
//
//   1/(p^2 - k^2) = ghat_n(p) + ghat_n_oscill(p)
//   ghat_n(p)        = sum_{j<n} (2k^2)^j / (p^2 + k^2)^(j+1)          (non-oscillatory)
//   ghat_n_oscill(p) = (2k^2)^n / ((p^2 - k^2)(p^2 + k^2)^n)           (oscillatory)
//
// plus the lambda-regularized symbol and the log-scale Gaussian
// representation of ghat_n_oscill whose fine-scale truncation realizes the
// principal value about |p| = k.

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "helmsplit/error.hpp"
#include "helmsplit/kernel_params.hpp"

namespace helmsplit::fourier {

/// Trapezoid nodes t_m = t_min + m * step, m = 0.., t_m <= t_max (log scale, s = e^t).
struct TruncatedScaleRange {
    double t_min = -40.0;
    double t_max = 10.0;
    double step = 0.25;

    void validate() const {
        if (!(t_min < t_max) || !(step > 0.0) || !std::isfinite(t_min) || !std::isfinite(t_max)) {
            throw ConfigError("TruncatedScaleRange: need t_min < t_max and step > 0");
        }
        if (node_count() < 2) {
            throw ConfigError("TruncatedScaleRange: fewer than two nodes");
        }
    }

    int node_count() const {
        return static_cast<int>(std::floor((t_max - t_min) / step * (1.0 + 1e-14))) + 1;
    }

    double node(int m) const { return t_min + m * step; }
};

namespace detail {

inline double p2_minus_k2(double p, double k) { return (p - k) * (p + k); }

inline void check_pole(double p, double k, const char* fn) {
    if (std::abs(p - k) < 1e-14 * k) {
        throw PoleError(std::string(fn) + ": |p| = k is a pole of the Helmholtz symbol");
    }
}

inline void check_frequency(double p, const char* fn) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
        throw DomainError(std::string(fn) + ": radial frequency must be finite and >= 0");
    }
}

/// (2k^2 / (p^2 + k^2))^n
inline double damping_ratio_power(double p, double k, int n) {
    const double ratio = 2.0 * k * k / (p * p + k * k);
    return std::pow(ratio, n);
}

}  // namespace detail

/// Exact symbol 1/(p^2 - k^2).
inline double symbol_exact(double p, const KernelParams& params) {
    params.validate();
    detail::check_frequency(p, "symbol_exact");
    detail::check_pole(p, params.k, "symbol_exact");
    return 1.0 / detail::p2_minus_k2(p, params.k);
}

/// Non-oscillatory partial sum ghat_n; positive and decreasing in p.
inline double symbol_nonoscillatory(double p, const KernelParams& params) {
    params.validate();
    detail::check_frequency(p, "symbol_nonoscillatory");
    const double k2 = params.k * params.k;
    const double denom = p * p + k2;
    const double ratio = 2.0 * k2 / denom;
    // Horner in ratio: (1/denom) * sum_{j<n} ratio^j
    double acc = 0.0;
    for (int j = params.n - 1; j >= 0; --j) {
        acc = acc * ratio + 1.0;
    }
    return acc / denom;
}

/// Oscillatory remainder; decays as p^(-2n-2).
inline double symbol_oscillatory(double p, const KernelParams& params) {
    params.validate();
    detail::check_frequency(p, "symbol_oscillatory");
    detail::check_pole(p, params.k, "symbol_oscillatory");
    return detail::damping_ratio_power(p, params.k, params.n) / detail::p2_minus_k2(p, params.k);
}

/// Regularized symbol 1/(p^2 - (k + i lambda)^2) split as (Re, Im).
inline std::complex<double> symbol_lambda(double p, const KernelParams& params, double lambda) {
    params.validate();
    detail::check_frequency(p, "symbol_lambda");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw DomainError("symbol_lambda: lambda must be positive");
    }
    const double k = params.k;
    const double l2 = lambda * lambda;
    if (p < 1e-6 * k) {
        // Removable 1/p: value of -1/(k + i lambda)^2 plus the O(p^2) term is below rounding.
        const double q = k * k + l2;
        return {(l2 - k * k) / (q * q), 2.0 * k * lambda / (q * q)};
    }
    const double a = p - k;
    const double b = p + k;
    const double da = a * a + l2;
    const double db = b * b + l2;
    const double re = (a / da + b / db) / (2.0 * p);
    const double im = (lambda / da - lambda / db) / (2.0 * p);
    return {re, im};
}

namespace detail {

/// (1/p)[(p-k) e^{-s(p-k)^2} + (p+k) e^{-s(p+k)^2}], with the removable p -> 0 limit.
inline double scale_bracket(double p, double k, double s) {
    if (p < 1e-6 * k) {
        const double sk2 = s * k * k;
        return 2.0 * std::exp(-sk2) * (1.0 - 2.0 * sk2);
    }
    const double a = p - k;
    const double b = p + k;
    return (a * std::exp(-s * a * a) + b * std::exp(-s * b * b)) / p;
}

/// 2^{n-1} k^{2n} / (p^2 + k^2)^n
inline double multiplier_prefactor(double p, double k, int n) {
    return 0.5 * damping_ratio_power(p, k, n);
}

}  // namespace detail

/// Integrand of the log-scale representation of ghat_n_oscill at scale t.
inline double multiplier_integrand(double p, const KernelParams& params, double t) {
    const double s = std::exp(t);
    return detail::multiplier_prefactor(p, params.k, params.n) *
           detail::scale_bracket(p, params.k, s) * s;
}

/// Trapezoidal sum over the truncated scales; smooth through p = k.
/// Scales are summed coarse to fine.
inline double multiplier_truncated(double p, const KernelParams& params,
                                   const TruncatedScaleRange& scales) {
    params.validate();
    scales.validate();
    detail::check_frequency(p, "multiplier_truncated");
    const double pref = detail::multiplier_prefactor(p, params.k, params.n);
    const int count = scales.node_count();
    double acc = 0.0;
    for (int m = 0; m < count; ++m) {
        const double s = std::exp(scales.node(m));
        acc += detail::scale_bracket(p, params.k, s) * s;
    }
    return pref * scales.step * acc;
}

/// Exact integral over t in [t_min, t_max] of the multiplier integrand.
inline double multiplier_truncated_exact(double p, const KernelParams& params, double t_min,
                                         double t_max) {
    params.validate();
    const double k = params.k;
    const double s0 = std::exp(t_min);
    const double s1 = std::exp(t_max);
    const double pref = detail::multiplier_prefactor(p, k, params.n);
    // (e^{-s0 u^2} - e^{-s1 u^2}) / u, with u -> 0 limit (s1 - s0) u
    auto branch = [&](double u) {
        if (std::abs(u) * std::sqrt(s1) < 1e-8) {
            return (s1 - s0) * u;
        }
        return -std::expm1(-s1 * u * u + s0 * u * u) * std::exp(-s0 * u * u) / u;
    };
    if (p < 1e-6 * k) {
        // p -> 0: integral of 2 e^{-s k^2}(1 - 2 s k^2) ds = 2 (1/k^2 + 2s) e^{-s k^2}
        const double k2 = k * k;
        auto anti = [k2](double s) { return 2.0 * (1.0 / k2 + 2.0 * s) * std::exp(-s * k2); };
        return pref * (anti(s1) - anti(s0));
    }
    return pref * (branch(p - k) + branch(p + k)) / p;
}

/// Relative difference used by the scale-range rule: |a - b| / max(|a|, |b|, 1/k^2).
inline double scaled_difference(double a, double b, double k) {
    const double scale = std::max({std::abs(a), std::abs(b), 1.0 / (k * k)});
    return std::abs(a - b) / scale;
}

/// Scale range for a radial frequency grid of spacing p_grid_spacing.
///
///  - coarse end: the integrand ~ 2^n e^t there; t_min puts it below
///    target_eps / k^2.
///  - fine end: the finest retained Gaussian in p has width e^{-t_max/2}
///    equal to a quarter of the grid spacing; finer scales are not
///    resolvable on the grid and are dropped.
///  - step: halved from 1/4 until the aliasing estimate
///    2 |Gamma(1 + 2 pi i / step)| is below target_eps.
inline TruncatedScaleRange choose_scale_range(const KernelParams& params, double p_grid_spacing,
                                              double target_eps) {
    params.validate();
    if (!(target_eps > 0.0 && target_eps < 1.0)) {
        throw ConfigError("choose_scale_range: target_eps must lie in (0, 1)");
    }
    if (!(p_grid_spacing > 0.0) || !std::isfinite(p_grid_spacing)) {
        throw ConfigError("choose_scale_range: grid spacing must be positive");
    }
    const double k = params.k;
    TruncatedScaleRange r;
    r.t_min = std::log(target_eps / (std::pow(2.0, params.n) * k * k)) - 1.0;
    r.t_max = -2.0 * std::log(0.25 * p_grid_spacing);
    r.step = 0.25;
    auto alias = [](double step) {
        const double x = 2.0 * M_PI / step;
        // |Gamma(1 + ix)|^2 = pi x / sinh(pi x), evaluated in logs
        const double log_g2 = std::log(M_PI * x) - (M_PI * x - std::log(2.0));
        return 2.0 * std::exp(0.5 * log_g2);
    };
    while (alias(r.step) > 0.1 * target_eps) {
        r.step *= 0.5;
    }
    if (!(r.t_min < r.t_max) || (r.t_max - r.t_min) / r.step > 1e6) {
        throw ConfigError("choose_scale_range: grid spacing too coarse for the requested accuracy");
    }
    r.validate();
    return r;
}

}  // namespace helmsplit::fourier
