#pragma once

// Numerical integration used as the independent route for every closed form
// in the library: adaptive Gauss-Kronrod on finite intervals and a
// panel-sum + Wynn-epsilon scheme for slowly decaying oscillatory integrals
// on [0, inf).

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "helmsplit/error.hpp"

namespace helmsplit::quad {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  ///< absolute error estimate
};

/// Adaptive 61-point Gauss-Kronrod on [a, b].
template <class F>
QuadResult adaptive(F&& f, double a, double b, double rel_tol = 1e-14, unsigned max_depth = 12) {
    double err = 0.0;
    double l1 = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, a, b, max_depth, rel_tol, &err, &l1);
    return {v, err};
}

/// Adaptive integration over [a, b] cut into panels of width <= panel.
/// Integrands on a log scale are bumps of width O(1); panels keep every
/// bump resolved no matter how long the interval is.
template <class F>
QuadResult adaptive_panels(F&& f, double a, double b, double panel = 2.0, double rel_tol = 1e-14) {
    const int count = std::max(1, static_cast<int>(std::ceil((b - a) / panel)));
    const double width = (b - a) / count;
    QuadResult total;
    for (int i = 0; i < count; ++i) {
        const double lo = a + i * width;
        const double hi = (i + 1 == count) ? b : lo + width;
        const QuadResult part = adaptive(f, lo, hi, rel_tol);
        total.value += part.value;
        total.error += part.error;
    }
    return total;
}

/// Wynn epsilon extrapolation of a sequence of partial sums.
/// Returns the last diagonal estimate and the difference to the previous one.
inline QuadResult wynn_epsilon(const std::vector<double>& partial) {
    const std::size_t n = partial.size();
    if (n < 3) {
        return {partial.empty() ? 0.0 : partial.back(), std::numeric_limits<double>::infinity()};
    }
    // eps[k][j]: column k of the epsilon table; even columns carry estimates.
    std::vector<std::vector<double>> eps(n + 1);
    eps[0].assign(n + 1, 0.0);
    eps[1] = partial;
    double best = partial.back();
    double prev = partial[n - 2];
    for (std::size_t k = 2; k <= n; ++k) {
        const auto& a = eps[k - 2];
        const auto& b = eps[k - 1];
        const std::size_t len = b.size() - 1;
        if (len == 0) {
            break;
        }
        eps[k].resize(len);
        for (std::size_t j = 0; j < len; ++j) {
            const double diff = b[j + 1] - b[j];
            const double base = (k == 2) ? 0.0 : a[j + 1];
            eps[k][j] = (diff == 0.0) ? std::numeric_limits<double>::infinity() : base + 1.0 / diff;
        }
        if (k % 2 == 1) {
            const auto& col = eps[k];
            if (!col.empty() && std::isfinite(col.back())) {
                prev = col.size() > 1 ? col[col.size() - 2] : best;
                best = col.back();
            }
        }
    }
    return {best, std::abs(best - prev)};
}

/// Integral of an oscillatory f over [0, inf).
///
/// The first panel is [0, first], then panels of width half_period follow;
/// when half_period matches the asymptotic zero spacing of the oscillation the
/// panel contributions alternate in sign and Wynn epsilon converges rapidly.
template <class F>
QuadResult oscillatory_half_line(F&& f, double first, double half_period, double rel_tol = 1e-12,
                                 int max_panels = 400) {
    std::vector<double> partial;
    partial.reserve(max_panels);
    double sum = adaptive(f, 0.0, first, 1e-13, 8).value;
    double estimate = sum;
    double last_err = std::numeric_limits<double>::infinity();
    int stable = 0;
    double largest = std::abs(sum);
    for (int m = 0; m < max_panels; ++m) {
        const double lo = first + m * half_period;
        sum += adaptive(f, lo, lo + half_period, 1e-13, 8).value;
        partial.push_back(sum);
        largest = std::max(largest, std::abs(sum));
        if (partial.size() >= 8 && partial.size() % 2 == 0) {
            const QuadResult w = wynn_epsilon(partial);
            // a result far below the partial sums is limited by their roundoff
            const double floor = 64.0 * std::numeric_limits<double>::epsilon() * largest;
            const double tol = std::max(rel_tol * std::abs(w.value), floor);
            if (std::abs(w.value - estimate) <= tol) {
                if (++stable >= 2) {
                    return {w.value, std::abs(w.value - estimate)};
                }
            } else {
                stable = 0;
            }
            last_err = std::abs(w.value - estimate);
            estimate = w.value;
        }
    }
    throw AccuracyError("oscillatory_half_line: no convergence", last_err);
}

}  // namespace helmsplit::quad
