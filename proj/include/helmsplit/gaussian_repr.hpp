#pragma once

// Gaussian integral representations of the non-oscillatory kernels,
//
//   g_n(r, k) = int e^{-r^2 e^t / 4} w_n(k, t) dt        (d = 3)
//   h_n(r, k) = int e^{-r^2 e^t / 4} omega_n(k, t) dt    (d = 2)
//
// and their trapezoidal discretization into sums of Gaussians.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "helmsplit/error.hpp"
#include "helmsplit/kernel_params.hpp"
#include "helmsplit/quadrature.hpp"
#include "helmsplit/spatial2d.hpp"
#include "helmsplit/spatial3d.hpp"

namespace helmsplit::gauss {

/// Nodes t_m = m * step for m = m_lo..m_hi.
struct LogQuadrature {
    double step = 0.25;
    int m_lo = 20;
    int m_hi = 200;

    void validate() const {
        if (!(step > 0.0) || !std::isfinite(step) || m_lo >= m_hi) {
            throw ConfigError("LogQuadrature: need step > 0 and m_lo < m_hi");
        }
    }

    int size() const { return m_hi - m_lo + 1; }
};

struct GaussianTerm {
    double weight = 0.0;
    double exponent = 0.0;

    friend bool operator==(const GaussianTerm&, const GaussianTerm&) = default;
};

/// sum_m weight_m exp(-exponent_m r^2), exponents strictly increasing.
struct GaussianSum {
    KernelParams params;
    LogQuadrature quad;
    std::vector<GaussianTerm> terms;
    double r_min = 0.0;  ///< validity interval
    double r_max = std::numeric_limits<double>::infinity();

    void validate() const {
        params.validate();
        double last = 0.0;
        for (const auto& t : terms) {
            if (!(t.exponent > last) || !std::isfinite(t.exponent)) {
                throw ConfigError("GaussianSum: exponents must be positive and strictly increasing");
            }
            if (!std::isfinite(t.weight)) {
                throw ConfigError("GaussianSum: non-finite weight");
            }
            last = t.exponent;
        }
    }

    bool covers(double lo, double hi) const { return r_min <= lo && hi <= r_max; }
};

namespace detail {

/// log( e^{-u} sum_{j<n} (2u)^j / j! )
inline double log_truncated_poisson(double u, int n) {
    if (u == 0.0) {
        return 0.0;
    }
    const double log2u = std::log(2.0 * u);
    double peak = -std::numeric_limits<double>::infinity();
    std::vector<double> logs(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        logs[j] = j * log2u - std::lgamma(j + 1.0);
        peak = std::max(peak, logs[j]);
    }
    double acc = 0.0;
    for (double l : logs) {
        acc += std::exp(l - peak);
    }
    return peak + std::log(acc) - u;
}

inline void check_weight_args(double k, int n, double t, const char* fn) {
    if (!(k > 0.0) || n < 1 || !std::isfinite(t)) {
        throw DomainError(std::string(fn) + ": need k > 0, n >= 1 and finite t");
    }
}

}  // namespace detail

/// 3D weight w_n(k, t) = e^{-k^2 e^{-t} + t/2} sum_{j<n} (2 k^2 e^{-t})^j / j! / (8 pi^{3/2})
inline double weight_w_n(double k, int n, double t) {
    detail::check_weight_args(k, n, t, "weight_w_n");
    const double u = k * k * std::exp(-t);
    if (std::isinf(u)) {
        return 0.0;
    }
    const double v = std::exp(detail::log_truncated_poisson(u, n) + 0.5 * t) / (8.0 * std::pow(M_PI, 1.5));
    if (!std::isfinite(v)) {
        throw RangeError("weight_w_n: overflow");
    }
    return v;
}

/// 2D weight omega_n(k, t) = e^{-k^2 e^{-t}} sum_{j<n} (2 k^2 e^{-t})^j / j! / (4 pi)
inline double weight_omega_n(double k, int n, double t) {
    detail::check_weight_args(k, n, t, "weight_omega_n");
    const double u = k * k * std::exp(-t);
    if (std::isinf(u)) {
        return 0.0;
    }
    const double v = std::exp(detail::log_truncated_poisson(u, n)) / (4.0 * M_PI);
    if (!std::isfinite(v)) {
        throw RangeError("weight_omega_n: overflow");
    }
    return v;
}

inline double weight(const KernelParams& params, double t) {
    return params.d == 3 ? weight_w_n(params.k, params.n, t) : weight_omega_n(params.k, params.n, t);
}

/// Closed-form kernel the sums approximate: g_n in 3D, h_n in 2D.
inline double kernel(const KernelParams& params, double r) {
    return params.d == 3 ? spatial3d::g_n_3d(r, params) : spatial2d::h_n_2d(r, params);
}

/// Trapezoidal discretization: terms (step * w(k, m step), e^{m step} / 4).
inline GaussianSum discretize(const KernelParams& params, const LogQuadrature& quad) {
    params.validate();
    quad.validate();
    GaussianSum sum;
    sum.params = params;
    sum.quad = quad;
    sum.terms.reserve(static_cast<std::size_t>(quad.size()));
    for (int m = quad.m_lo; m <= quad.m_hi; ++m) {
        const double t = m * quad.step;
        const double exponent = 0.25 * std::exp(t);
        if (std::isinf(exponent)) {
            throw RangeError("discretize: Gaussian exponent overflows");
        }
        sum.terms.push_back({quad.step * weight(params, t), exponent});
    }
    // The sharpest Gaussian decays to e^{-36} beyond 12 e^{-t_hi / 2}.
    sum.r_min = 12.0 * std::exp(-0.5 * quad.m_hi * quad.step);
    return sum;
}

/// Value of the sum; terms accumulated coarse to fine.
inline double evaluate_sum(const GaussianSum& sum, double r) {
    if (!(r >= 0.0)) {
        throw DomainError("evaluate_sum: r must be >= 0");
    }
    const double r2 = r * r;
    double acc = 0.0;
    for (const auto& t : sum.terms) {
        acc += t.weight * std::exp(-t.exponent * r2);
    }
    return acc;
}

/// Node range and step for relative accuracy eps on [r_min, r_max].
///
/// The coarse end drops scales where the factor e^{-k^2 e^{-t}} sum (2k^2 e^{-t})^j / j!
/// is below eps; the fine end keeps Gaussians until e^t r_min^2 / 4 exceeds
/// max(36, log(1/eps) + 5). With r_max > 0 the step also covers the decay of
/// the kernel to r_max, and the coarse end is extended until the dropped weight
/// is below eps times the kernel at r_max.
inline LogQuadrature choose_quadrature(const KernelParams& params, double eps, double r_min, double r_max = 0.0) {
    params.validate();
    if (!(eps > 0.0 && eps < 1.0) || !(r_min > 0.0)) {
        throw ConfigError("choose_quadrature: need 0 < eps < 1 and r_min > 0");
    }
    const double log_eps = std::log(eps);
    double u = 1.0;
    while (detail::log_truncated_poisson(u, params.n) > log_eps) {
        u *= 2.0;
    }
    double lo = u / 2.0;
    double hi = u;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (detail::log_truncated_poisson(mid, params.n) > log_eps ? lo : hi) = mid;
    }
    const double t_lo = 2.0 * std::log(params.k) - std::log(hi);
    const double cut = std::max(36.0, -log_eps + 5.0);
    const double t_hi = std::log(4.0 * cut / (r_min * r_min));
    LogQuadrature q;
    // the rule's error scales like the undamped 1/r kernel, so the e^{-k r_max}
    // decay of the target enters the step budget
    const double decay = r_max > 0.0 ? params.k * r_max : 0.0;
    q.step = std::min(0.5, M_PI * M_PI / (-log_eps + decay + 4.0));
    q.m_lo = static_cast<int>(std::floor(t_lo / q.step));
    q.m_hi = static_cast<int>(std::ceil(t_hi / q.step));
    if (r_max > 0.0) {
        const double floor_value = 0.01 * eps * std::abs(kernel(params, r_max));
        while (q.m_lo > q.m_hi - 100000 && q.step * weight(params, (q.m_lo - 1) * q.step) > floor_value) {
            --q.m_lo;
        }
    }
    q.validate();
    return q;
}

/// Discretized sum valid on [r_min, r_max] to relative accuracy about eps.
inline GaussianSum build_sum(const KernelParams& params, double eps, double r_min, double r_max) {
    GaussianSum s = discretize(params, choose_quadrature(params, eps, r_min, r_max));
    s.r_min = r_min;
    s.r_max = r_max;
    return s;
}

/// Replace every term with exponent > (6 / r_resolution)^2 by one Gaussian.
///
/// At r >= r_resolution those terms act as a delta function; the replacement
/// carries their total mass sum w_i (pi / a_i)^{d/2} at the smallest merged
/// exponent, so the sum is unchanged there to double precision.
inline GaussianSum merge_sharp_terms(const GaussianSum& sum, double r_resolution) {
    if (!(r_resolution > 0.0)) {
        throw DomainError("merge_sharp_terms: r_resolution must be positive");
    }
    const double threshold = std::pow(6.0 / r_resolution, 2);
    GaussianSum out = sum;
    out.terms.clear();
    double a_min = 0.0;
    double merged_weight = 0.0;
    int merged = 0;
    const double half_d = 0.5 * sum.params.d;
    for (const auto& t : sum.terms) {
        if (t.exponent <= threshold) {
            out.terms.push_back(t);
            continue;
        }
        if (merged == 0) {
            a_min = t.exponent;
        }
        merged_weight += t.weight * std::pow(a_min / t.exponent, half_d);
        ++merged;
    }
    if (merged > 0) {
        out.terms.push_back({merged_weight, a_min});
    }
    out.r_min = std::max(sum.r_min, r_resolution);
    return out;
}

/// Logarithmically spaced samples, per_decade points per decade, both ends included.
inline std::vector<double> log_samples(double lo, double hi, int per_decade = 40) {
    if (!(lo > 0.0) || !(hi > lo)) {
        throw DomainError("log_samples: need 0 < lo < hi");
    }
    const double decades = std::log10(hi / lo);
    const int count = std::max(2, static_cast<int>(std::ceil(decades * per_decade)) + 1);
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        out[i] = lo * std::pow(10.0, decades * i / (count - 1));
    }
    out.back() = hi;
    return out;
}

/// (r, log10 |(kernel - sum) / kernel|), floored at -16.
inline std::vector<std::pair<double, double>> relative_error_curve(const GaussianSum& sum, const KernelParams& params,
                                                                   const std::vector<double>& r_samples) {
    std::vector<std::pair<double, double>> out;
    out.reserve(r_samples.size());
    for (double r : r_samples) {
        const double exact = kernel(params, r);
        if (exact == 0.0) {
            throw DomainError("relative_error_curve: kernel vanishes");
        }
        const double rel = std::abs((exact - evaluate_sum(sum, r)) / exact);
        out.emplace_back(r, rel > 0.0 ? std::max(std::log10(rel), -16.0) : -16.0);
    }
    return out;
}

/// (r, log10 |kernel - sum|); an exact match reports the rounding floor of the kernel.
inline std::vector<std::pair<double, double>> absolute_error_curve(const GaussianSum& sum, const KernelParams& params,
                                                                   const std::vector<double>& r_samples) {
    std::vector<std::pair<double, double>> out;
    out.reserve(r_samples.size());
    for (double r : r_samples) {
        const double exact = kernel(params, r);
        const double floor = std::log10(std::max(std::abs(exact), std::numeric_limits<double>::min()) * 1.1102230246251565e-16);
        const double diff = std::abs(exact - evaluate_sum(sum, r));
        out.emplace_back(r, diff > 0.0 ? std::max(std::log10(diff), floor) : floor);
    }
    return out;
}

/// Adaptive quadrature of the integral representation at r (test oracle).
inline double integral_representation(const KernelParams& params, double r) {
    params.validate();
    if (!(r > 0.0)) {
        throw DomainError("integral_representation: r must be positive");
    }
    // Integrand below e^{-745} outside [t_a, t_b].
    const double t_a = 2.0 * std::log(params.k) - std::log(800.0 + 4.0 * params.n);
    const double t_b = std::log(4.0 * 800.0 / (r * r));
    auto f = [&](double t) { return std::exp(-0.25 * r * r * std::exp(t)) * weight(params, t); };
    return quad::adaptive_panels(f, t_a, t_b, 1.0, 1e-15).value;
}

/// Plain-text table: header comment with provenance, then "weight exponent" rows
/// printed with 17 significant digits (round-trips bit-exactly).
inline void write_gaussian_sum(std::ostream& os, const GaussianSum& sum) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "# k=%.17g n=%d d=%d delta=%.17g m_lo=%d m_hi=%d", sum.params.k, sum.params.n,
                  sum.params.d, sum.quad.step, sum.quad.m_lo, sum.quad.m_hi);
    os << buf << '\n';
    std::snprintf(buf, sizeof buf, "# r_min=%.17g r_max=%.17g", sum.r_min, sum.r_max);
    os << buf << '\n';
    for (const auto& t : sum.terms) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g", t.weight, t.exponent);
        os << buf << '\n';
    }
}

inline GaussianSum read_gaussian_sum(std::istream& is) {
    GaussianSum sum;
    std::string line;
    bool have_header = false;
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            double k = 0, step = 0, r_min = 0, r_max = 0;
            int n = 0, d = 0, m_lo = 0, m_hi = 0;
            if (std::sscanf(line.c_str(), "# k=%lg n=%d d=%d delta=%lg m_lo=%d m_hi=%d", &k, &n, &d, &step, &m_lo,
                            &m_hi) == 6) {
                sum.params = {k, n, d};
                sum.quad = {step, m_lo, m_hi};
                have_header = true;
            } else if (std::sscanf(line.c_str(), "# r_min=%lg r_max=%lg", &r_min, &r_max) == 2) {
                sum.r_min = r_min;
                sum.r_max = r_max;
            }
            continue;
        }
        std::istringstream row(line);
        GaussianTerm t;
        if (!(row >> t.weight >> t.exponent)) {
            throw ConfigError("read_gaussian_sum: malformed row: " + line);
        }
        sum.terms.push_back(t);
    }
    if (!have_header) {
        throw ConfigError("read_gaussian_sum: missing provenance header");
    }
    sum.validate();
    return sum;
}

}  // namespace helmsplit::gauss
