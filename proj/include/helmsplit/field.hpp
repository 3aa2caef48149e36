#pragma once

// Uniform complex grid samples and their on-disk form: a flat binary file of
// little-endian float64 (re, im) pairs in row-major order (last axis fastest)
// plus a sidecar text header "<path>.hdr".

#include <bit>
#include <cmath>
#include <functional>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "helmsplit/error.hpp"

namespace helmsplit::grid {

struct Field {
    int dims = 3;
    std::vector<std::size_t> shape;  ///< samples per axis
    double spacing = 1.0;
    std::vector<double> origin;      ///< coordinate of sample (0, ..., 0)
    std::vector<std::complex<double>> values;

    static Field zeros(int dims, std::size_t n, double spacing, double origin) {
        Field f;
        f.dims = dims;
        f.shape.assign(static_cast<std::size_t>(dims), n);
        f.spacing = spacing;
        f.origin.assign(static_cast<std::size_t>(dims), origin);
        f.values.assign(f.size(), {0.0, 0.0});
        return f;
    }

    std::size_t size() const {
        return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
    }

    /// Coordinate of the sample with multi-index idx along axis.
    double coord(int axis, std::size_t idx) const { return origin[axis] + spacing * static_cast<double>(idx); }

    /// Multi-index of a flat offset.
    std::vector<std::size_t> unflatten(std::size_t flat) const {
        std::vector<std::size_t> idx(shape.size());
        for (int a = dims - 1; a >= 0; --a) {
            idx[a] = flat % shape[a];
            flat /= shape[a];
        }
        return idx;
    }

    bool same_grid(const Field& o) const {
        return dims == o.dims && shape == o.shape && spacing == o.spacing && origin == o.origin;
    }

    void validate() const {
        if (dims != 2 && dims != 3) {
            throw ConfigError("Field: dims must be 2 or 3");
        }
        if (shape.size() != static_cast<std::size_t>(dims) || origin.size() != static_cast<std::size_t>(dims)) {
            throw ConfigError("Field: shape and origin must have dims entries");
        }
        for (auto s : shape) {
            if (s < 8) {
                throw ConfigError("Field: at least 8 samples per axis required");
            }
        }
        if (!(spacing > 0.0) || !std::isfinite(spacing)) {
            throw ConfigError("Field: spacing must be positive");
        }
        if (values.size() != size()) {
            throw ConfigError("Field: value count does not match shape");
        }
        for (const auto& v : values) {
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                throw ConfigError("Field: non-finite sample");
            }
        }
    }
};

/// Compactly supported source (1 - |x|^2/R^2)^6 on a cube grid centered at 0
/// with samples spanning [-half_width, half_width] per axis.
inline Field smooth_bump(int dims, std::size_t n, double half_width, double radius) {
    if (n < 2 || !(half_width > 0.0) || !(radius > 0.0)) {
        throw ConfigError("smooth_bump: need n >= 2, half_width > 0, radius > 0");
    }
    const double h = 2.0 * half_width / static_cast<double>(n - 1);
    Field f = Field::zeros(dims, n, h, -half_width);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto idx = f.unflatten(i);
        double r2 = 0.0;
        for (int a = 0; a < dims; ++a) {
            const double x = f.coord(a, idx[a]);
            r2 += x * x;
        }
        const double rho2 = r2 / (radius * radius);
        f.values[i] = rho2 < 1.0 ? std::pow(1.0 - rho2, 6) : 0.0;
    }
    return f;
}

namespace detail {

inline std::uint64_t to_little(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t out = 0;
        for (int i = 0; i < 8; ++i) {
            out = (out << 8) | ((v >> (8 * i)) & 0xffu);
        }
        return out;
    }
    return v;
}

}  // namespace detail

inline std::string header_path(const std::string& path) { return path + ".hdr"; }

inline void write_field(const std::string& path, const Field& f) {
    f.validate();
    std::ofstream bin(path, std::ios::binary);
    if (!bin) {
        throw ConfigError("write_field: cannot open " + path);
    }
    for (const auto& v : f.values) {
        for (double part : {v.real(), v.imag()}) {
            const std::uint64_t bits = detail::to_little(std::bit_cast<std::uint64_t>(part));
            bin.write(reinterpret_cast<const char*>(&bits), sizeof bits);
        }
    }
    std::ofstream hdr(header_path(path));
    hdr.precision(17);
    hdr << "dims " << f.dims << "\nshape";
    for (auto s : f.shape) {
        hdr << ' ' << s;
    }
    hdr << "\nspacing " << f.spacing << "\norigin";
    for (double o : f.origin) {
        hdr << ' ' << o;
    }
    hdr << '\n';
    if (!bin || !hdr) {
        throw ConfigError("write_field: write failed for " + path);
    }
}

inline Field read_field(const std::string& path) {
    std::ifstream hdr(header_path(path));
    if (!hdr) {
        throw ConfigError("read_field: missing header " + header_path(path));
    }
    Field f;
    f.shape.clear();
    f.origin.clear();
    std::string line;
    while (std::getline(hdr, line)) {
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "dims") {
            ls >> f.dims;
        } else if (key == "shape") {
            for (std::size_t s; ls >> s;) {
                f.shape.push_back(s);
            }
        } else if (key == "spacing") {
            ls >> f.spacing;
        } else if (key == "origin") {
            for (double o; ls >> o;) {
                f.origin.push_back(o);
            }
        } else if (!key.empty() && key[0] != '#') {
            throw ConfigError("read_field: unknown header key '" + key + "'");
        }
    }
    std::ifstream bin(path, std::ios::binary);
    if (!bin) {
        throw ConfigError("read_field: cannot open " + path);
    }
    f.values.resize(f.size());
    for (auto& v : f.values) {
        std::uint64_t re = 0;
        std::uint64_t im = 0;
        bin.read(reinterpret_cast<char*>(&re), sizeof re);
        bin.read(reinterpret_cast<char*>(&im), sizeof im);
        if (!bin) {
            throw ConfigError("read_field: truncated data in " + path);
        }
        v = {std::bit_cast<double>(detail::to_little(re)), std::bit_cast<double>(detail::to_little(im))};
    }
    f.validate();
    return f;
}

}  // namespace helmsplit::grid
