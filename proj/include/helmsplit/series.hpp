#pragma once

// Truncated power series with exact rational coefficients.

#include <array>
#include <cstddef>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace helmsplit::series {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Coefficients c[0..order] of sum c_j x^j.
using RationalSeries = std::vector<Rational>;

inline Integer factorial(unsigned n) {
    Integer f = 1;
    for (unsigned i = 2; i <= n; ++i) {
        f *= i;
    }
    return f;
}

/// Harmonic number H_m = 1 + 1/2 + ... + 1/m (H_0 = 0).
inline Rational harmonic(unsigned m) {
    Rational h = 0;
    for (unsigned i = 1; i <= m; ++i) {
        h += Rational(1, i);
    }
    return h;
}

inline RationalSeries exp_neg(std::size_t order) {
    RationalSeries s(order + 1);
    Integer f = 1;
    for (std::size_t j = 0; j <= order; ++j) {
        if (j > 0) {
            f *= static_cast<unsigned>(j);
        }
        s[j] = Rational((j % 2 == 0) ? 1 : -1) / Rational(f);
    }
    return s;
}

inline RationalSeries cos_series(std::size_t order) {
    RationalSeries s(order + 1);
    Integer f = 1;
    for (std::size_t j = 0; j <= order; ++j) {
        if (j > 0) {
            f *= static_cast<unsigned>(j);
        }
        if (j % 2 == 0) {
            s[j] = Rational((j % 4 == 0) ? 1 : -1) / Rational(f);
        }
    }
    return s;
}

/// Product truncated at the given order.
inline RationalSeries multiply(const RationalSeries& a, const RationalSeries& b, std::size_t order) {
    RationalSeries out(order + 1);
    for (std::size_t i = 0; i < a.size() && i <= order; ++i) {
        if (a[i] == 0) {
            continue;
        }
        for (std::size_t j = 0; j < b.size() && i + j <= order; ++j) {
            if (b[j] != 0) {
                out[i + j] += a[i] * b[j];
            }
        }
    }
    return out;
}

inline std::vector<double> to_double(const RationalSeries& s) {
    std::vector<double> out;
    out.reserve(s.size());
    for (const auto& c : s) {
        out.push_back(c.convert_to<double>());
    }
    return out;
}

/// Horner evaluation of sum c_j x^j.
inline double horner(const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

/// Per-order cache of double coefficient tables, filled on first use.
class LazyTable {
public:
    static constexpr int kSize = 65;

    template <class Build>
    const std::vector<double>& get(int n, Build&& build) {
        if (n < 0 || n >= kSize) {
            throw std::out_of_range("LazyTable: order out of range");
        }
        std::lock_guard lock(mutex_);
        auto& slot = slots_[static_cast<std::size_t>(n)];
        if (slot.empty()) {
            slot = build(n);
        }
        return slot;
    }

private:
    std::mutex mutex_;
    std::array<std::vector<double>, kSize> slots_;
};

}  // namespace helmsplit::series
