#pragma once

#include <cmath>
#include <string>

#include "helmsplit/error.hpp"

namespace helmsplit {

/// Wavenumber k, smoothness order n and dimension d of a split kernel.
struct KernelParams {
    double k = 1.0;
    int n = 1;
    int d = 3;

    static constexpr int kMaxN = 64;

    void validate() const {
        if (!(k > 0.0) || !std::isfinite(k)) {
            throw ConfigError("KernelParams: k must be positive and finite");
        }
        if (n < 1 || n > kMaxN) {
            throw ConfigError("KernelParams: n must lie in [1, 64], got " + std::to_string(n));
        }
        if (d != 2 && d != 3) {
            throw ConfigError("KernelParams: d must be 2 or 3, got " + std::to_string(d));
        }
    }

    friend bool operator==(const KernelParams&, const KernelParams&) = default;
};

inline KernelParams make_params(double k, int n, int d) {
    KernelParams p{k, n, d};
    p.validate();
    return p;
}

}  // namespace helmsplit
