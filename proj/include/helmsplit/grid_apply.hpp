#pragma once

// Desk-scale application of the split Green's function to a sampled source:
//
//   u = G * f = (g_n * f) + (q_n * f) + i (Im G * f)
//
// Non-oscillatory part: separable Gaussian convolutions from the discretized
// integral representation. Oscillatory real part and imaginary part:
// aperiodic convolutions with the sampled smooth kernels, evaluated by FFT on
// a grid zero-padded by at least a factor 2 per axis. A brute-force O(N^2) convolution
// with the full kernel serves as the oracle.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include <fftw3.h>

#include "helmsplit/error.hpp"
#include "helmsplit/field.hpp"
#include "helmsplit/fourier_kernels.hpp"
#include "helmsplit/gaussian_repr.hpp"
#include "helmsplit/kernel_params.hpp"
#include "helmsplit/quadrature.hpp"
#include "helmsplit/spatial2d.hpp"
#include "helmsplit/spatial3d.hpp"
#include "helmsplit/specfun.hpp"

namespace helmsplit::grid {

using cplx = std::complex<double>;

/// Brute-force oracle budget (total samples).
inline constexpr std::size_t kOracleBudget = 64 * 64 * 64;

namespace detail {

/// Radius of the ball with the volume (area) of one cell.
inline double equivalent_radius(int d, double h) {
    return d == 3 ? h * std::cbrt(3.0 / (4.0 * M_PI)) : h / std::sqrt(M_PI);
}

inline double cell_volume(int d, double h) { return d == 3 ? h * h * h : h * h; }

/// Imaginary part of G; the r = 0 value is the continuous limit.
inline double imag_kernel(const KernelParams& p, double r) {
    if (p.d == 3) {
        return r == 0.0 ? p.k / (4.0 * M_PI) : std::sin(p.k * r) / (4.0 * M_PI * r);
    }
    return 0.25 * specfun::bessel_j0(p.k * r);
}

/// Real part of G for r > 0.
inline double real_kernel(const KernelParams& p, double r) {
    if (p.d == 3) {
        return std::cos(p.k * r) / (4.0 * M_PI * r);
    }
    return -0.25 * specfun::bessel_y0(p.k * r);
}

/// Oscillatory real part q_n (3D) or v_n (2D), continuous at 0.
inline double oscillatory_kernel(const KernelParams& p, double r) {
    return p.d == 3 ? spatial3d::q_n_3d(r, p) : spatial2d::v_n_2d(r, p);
}

/// x Y1(x) + 2/pi; the ascending series avoids cancellation for x < 1.
inline double x_y1_plus_two_over_pi(double x) {
    if (x >= 1.0) {
        return x * specfun::bessel_y1(x) + 2.0 / M_PI;
    }
    constexpr double euler_gamma = 0.57721566490153286061;
    const double half = 0.5 * x;
    double term = half;  // (x/2)^{2m+1} / (m! (m+1)!)
    double harmonic = 0.0;
    double acc = 0.0;
    for (int m = 0; m < 30; ++m) {
        if (m > 0) {
            harmonic += 1.0 / m;
            term *= -half * half / (static_cast<double>(m) * (m + 1));
        }
        acc += term * (2.0 * harmonic + 1.0 / (m + 1) - 2.0 * euler_gamma);
    }
    return (2.0 / M_PI) * x * specfun::bessel_j1(x) * std::log(half) - x / M_PI * acc;
}

/// Integral of Re G over the equivalent-volume ball.
inline double self_cell_real(const KernelParams& p, double h) {
    const double R = equivalent_radius(p.d, h);
    const double k = p.k;
    const double x = k * R;
    if (p.d == 3) {
        const double s = std::sin(0.5 * x);
        return (x * std::sin(x) - 2.0 * s * s) / (k * k);
    }
    return -(M_PI / 2.0) / (k * k) * x_y1_plus_two_over_pi(x);
}

/// Integral of the non-oscillatory kernel over the equivalent-volume ball.
inline double self_cell_nonoscillatory(const KernelParams& p, double h) {
    const double R = equivalent_radius(p.d, h);
    if (p.d == 3) {
        // g_n(r) 4 pi r^2 = e^{-kr} r P_n(kr): smooth
        auto f = [&](double r) { return r == 0.0 ? 0.0 : spatial3d::g_n_3d(r, p) * 4.0 * M_PI * r * r; };
        return quad::adaptive(f, 0.0, R, 1e-14).value;
    }
    // h_n(r) 2 pi r with r = R e^{-s}: integrable log singularity becomes a decaying tail
    auto f = [&](double s) {
        const double r = R * std::exp(-s);
        return spatial2d::h_n_2d(r, p) * 2.0 * M_PI * r * r;
    };
    return quad::adaptive_panels(f, 0.0, 60.0, 2.0, 1e-14).value;
}

/// Owning FFTW buffer with forward/backward in-place plans.
class FftGrid {
public:
    explicit FftGrid(std::vector<int> dims) : dims_(std::move(dims)) {
        total_ = 1;
        for (int n : dims_) {
            total_ *= static_cast<std::size_t>(n);
        }
        data_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total_));
        if (data_ == nullptr) {
            throw std::bad_alloc();
        }
        forward_ = fftw_plan_dft(static_cast<int>(dims_.size()), dims_.data(), data_, data_, FFTW_FORWARD,
                                 FFTW_ESTIMATE);
        backward_ = fftw_plan_dft(static_cast<int>(dims_.size()), dims_.data(), data_, data_, FFTW_BACKWARD,
                                  FFTW_ESTIMATE);
    }
    FftGrid(const FftGrid&) = delete;
    FftGrid& operator=(const FftGrid&) = delete;
    ~FftGrid() {
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
        fftw_free(data_);
    }

    cplx* data() { return reinterpret_cast<cplx*>(data_); }
    std::size_t size() const { return total_; }
    void forward() { fftw_execute(forward_); }
    void backward() { fftw_execute(backward_); }

private:
    std::vector<int> dims_;
    std::size_t total_ = 0;
    fftw_complex* data_ = nullptr;
    fftw_plan forward_ = nullptr;
    fftw_plan backward_ = nullptr;
};

/// Padded FFT length per axis: longest axis plus the zero padding.
inline std::vector<int> padded_dims(const Field& f, std::size_t padding) {
    const std::size_t longest = *std::max_element(f.shape.begin(), f.shape.end());
    return std::vector<int>(f.shape.size(), static_cast<int>(longest + padding));
}

/// Transform of a radial kernel sampled on the signed offsets |i| < N_axis of
/// the padded grid, scaled by the cell volume. Other entries are never reached
/// by an aperiodic product and are left zero.
inline std::vector<cplx> kernel_transform(const Field& like, std::size_t padding,
                                          const std::function<cplx(double)>& kernel) {
    const auto dims = padded_dims(like, padding);
    FftGrid grid(dims);
    const int d = like.dims;
    const double h = like.spacing;
    const double vol = cell_volume(d, h);
    cplx* data = grid.data();
    const std::size_t total = grid.size();
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rest = flat;
        double r2 = 0.0;
        bool unused = false;
        for (int a = d - 1; a >= 0; --a) {
            const int m = dims[a];
            const int n = static_cast<int>(like.shape[a]);
            const int i = static_cast<int>(rest % static_cast<std::size_t>(m));
            rest /= static_cast<std::size_t>(m);
            int off = 0;
            if (i <= n - 1) {
                off = i;
            } else if (i >= m - (n - 1)) {
                off = i - m;
            } else {
                unused = true;
            }
            r2 += static_cast<double>(off) * off;
        }
        data[flat] = unused ? cplx{} : kernel(h * std::sqrt(r2)) * vol;
    }
    grid.forward();
    return {data, data + total};
}

/// u = sum_y f(y) K(x - y) given the transform of K from kernel_transform.
inline Field convolve_padded(const Field& f, std::size_t padding, const std::vector<cplx>& kernel_hat) {
    const auto dims = padded_dims(f, padding);
    FftGrid grid(dims);
    if (grid.size() != kernel_hat.size()) {
        throw ConfigError("convolve_padded: kernel transform does not match grid");
    }
    cplx* data = grid.data();
    std::fill(data, data + grid.size(), cplx{});
    const int d = f.dims;
    auto padded_index = [&](const std::vector<std::size_t>& idx) {
        std::size_t flat = 0;
        for (int a = 0; a < d; ++a) {
            flat = flat * static_cast<std::size_t>(dims[a]) + idx[a];
        }
        return flat;
    };
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        data[padded_index(f.unflatten(i))] = f.values[i];
    }
    grid.forward();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        data[i] *= kernel_hat[i];
    }
    grid.backward();
    const double norm = 1.0 / static_cast<double>(grid.size());
    Field out = f;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        out.values[i] = data[padded_index(f.unflatten(i))] * norm;
    }
    return out;
}

inline void check_resolution(const KernelParams& p, const Field& f) {
    if (!(M_PI / f.spacing > 3.0 * p.k)) {
        throw ResolutionError("grid Nyquist frequency pi/h must exceed 3k");
    }
}

inline double diameter(const Field& f) {
    double s = 0.0;
    for (auto n : f.shape) {
        const double len = f.spacing * static_cast<double>(n - 1);
        s += len * len;
    }
    return std::sqrt(s);
}

}  // namespace detail

struct ApplyPlan {
    KernelParams params;
    fourier::TruncatedScaleRange scales;
    gauss::GaussianSum gaussians;
    std::size_t padding = 0;  ///< zero cells appended to the longest axis before the FFT
    std::vector<std::size_t> shape;
    double spacing = 0.0;
    double self_nonosc = 0.0;             ///< integral of g_n / h_n over the self cell
    std::vector<cplx> oscillatory_hat;    ///< transform of the sampled q_n / v_n kernel
    std::vector<cplx> full_smooth_hat;    ///< transform of q_n + i Im G

    bool matches(const Field& f) const { return f.shape == shape && f.spacing == spacing && f.dims == params.d; }
};

/// Precompute everything that depends only on the grid and the kernel.
inline ApplyPlan make_plan(const KernelParams& params, const Field& like, double target_eps = 1e-10) {
    params.validate();
    like.validate();
    if (like.dims != params.d) {
        throw ConfigError("make_plan: field dimension does not match params.d");
    }
    detail::check_resolution(params, like);
    ApplyPlan plan;
    plan.params = params;
    plan.shape = like.shape;
    plan.spacing = like.spacing;
    const std::size_t longest = *std::max_element(like.shape.begin(), like.shape.end());
    const double h = like.spacing;
    plan.padding = longest;
    if (params.d == 3) {
        // keep the non-oscillatory tail inside the padded box
        try {
            const double reach = spatial3d::support_radius(params, target_eps);
            plan.padding = std::max(longest, static_cast<std::size_t>(std::ceil(reach / h)));
        } catch (const NoCrossingError&) {
        }
    }
    const double diam = detail::diameter(like);
    const double p_spacing = 2.0 * M_PI / (static_cast<double>(longest + plan.padding) * h);
    plan.scales = fourier::choose_scale_range(params, p_spacing, target_eps);
    plan.gaussians = gauss::merge_sharp_terms(gauss::build_sum(params, target_eps, h, diam), h);
    if (!plan.gaussians.covers(h, diam)) {
        throw ConfigError("make_plan: Gaussian validity interval does not cover [h, diameter]");
    }
    plan.self_nonosc = detail::self_cell_nonoscillatory(params, h);
    plan.oscillatory_hat =
        detail::kernel_transform(like, plan.padding,
                                 [&](double r) { return cplx(detail::oscillatory_kernel(params, r), 0.0); });
    plan.full_smooth_hat = detail::kernel_transform(like, plan.padding, [&](double r) {
        return cplx(detail::oscillatory_kernel(params, r), detail::imag_kernel(params, r));
    });
    return plan;
}

namespace detail {

inline void check_plan(const ApplyPlan& plan, const Field& f) {
    f.validate();
    if (!plan.matches(f)) {
        throw ConfigError("field grid does not match the plan");
    }
}

/// One-dimensional convolution along an axis with a symmetric stencil
/// (stencil[j] for offsets +-j), zero outside the grid.
inline void convolve_axis(const std::vector<std::size_t>& shape, int axis, const std::vector<double>& stencil,
                          const std::vector<cplx>& in, std::vector<cplx>& out) {
    const std::size_t n = shape[axis];
    std::size_t stride = 1;
    for (std::size_t a = axis + 1; a < shape.size(); ++a) {
        stride *= shape[a];
    }
    const std::size_t total = in.size();
    const std::size_t block = stride * n;
    const int reach = static_cast<int>(stencil.size()) - 1;
    std::vector<cplx> line(n);
    for (std::size_t base = 0; base < total; base += block) {
        for (std::size_t inner = 0; inner < stride; ++inner) {
            const std::size_t start = base + inner;
            for (std::size_t i = 0; i < n; ++i) {
                line[i] = in[start + i * stride];
            }
            for (std::size_t i = 0; i < n; ++i) {
                cplx acc = stencil[0] * line[i];
                for (int j = 1; j <= reach; ++j) {
                    const int ip = static_cast<int>(i) + j;
                    const int im = static_cast<int>(i) - j;
                    if (ip < static_cast<int>(n)) {
                        acc += stencil[j] * line[ip];
                    }
                    if (im >= 0) {
                        acc += stencil[j] * line[im];
                    }
                }
                out[start + i * stride] = acc;
            }
        }
    }
}

}  // namespace detail

/// Real part of the oscillatory component applied to f (aperiodic FFT convolution).
inline Field apply_oscillatory_real(const Field& f, const ApplyPlan& plan) {
    detail::check_plan(plan, f);
    detail::check_resolution(plan.params, f);
    return detail::convolve_padded(f, plan.padding, plan.oscillatory_hat);
}

/// Imaginary-part kernel (sin(kr)/(4 pi r) or J0(kr)/4) convolved with f, weights h^d.
inline Field apply_imaginary(const Field& f, const KernelParams& params) {
    params.validate();
    f.validate();
    if (f.dims != params.d) {
        throw ConfigError("apply_imaginary: field dimension does not match params.d");
    }
    const std::size_t padding = *std::max_element(f.shape.begin(), f.shape.end());
    const auto hat =
        detail::kernel_transform(f, padding, [&](double r) { return cplx(detail::imag_kernel(params, r), 0.0); });
    return detail::convolve_padded(f, padding, hat);
}

/// Non-oscillatory part: weighted separable Gaussian convolutions plus a
/// self-cell correction replacing the sampled value at r = 0 by the cell integral.
inline Field apply_nonoscillatory(const Field& f, const ApplyPlan& plan) {
    detail::check_plan(plan, f);
    const double h = f.spacing;
    if (!plan.gaussians.covers(h, detail::diameter(f))) {
        throw ConfigError("apply_nonoscillatory: Gaussian validity does not cover grid scales");
    }
    const int d = f.dims;
    const double vol = detail::cell_volume(d, h);
    const std::size_t max_reach = *std::max_element(f.shape.begin(), f.shape.end()) - 1;
    Field out = f;
    std::fill(out.values.begin(), out.values.end(), cplx{});
    std::vector<cplx> a(f.values.size());
    std::vector<cplx> b(f.values.size());
    double sampled_origin = 0.0;
    // stencil cut where exp(-a x^2) < 1e-16
    const double cut = std::log(1e16);
    for (const auto& term : plan.gaussians.terms) {
        const auto reach = std::min<std::size_t>(
            max_reach, static_cast<std::size_t>(std::floor(std::sqrt(cut / term.exponent) / h)));
        std::vector<double> stencil(reach + 1);
        for (std::size_t j = 0; j <= reach; ++j) {
            const double x = h * static_cast<double>(j);
            stencil[j] = std::exp(-term.exponent * x * x);
        }
        const double w = term.weight * vol;
        sampled_origin += term.weight;
        if (reach == 0) {
            for (std::size_t i = 0; i < out.values.size(); ++i) {
                out.values[i] += w * f.values[i];
            }
            continue;
        }
        a = f.values;
        for (int axis = 0; axis < d; ++axis) {
            detail::convolve_axis(f.shape, axis, stencil, a, b);
            std::swap(a, b);
        }
        for (std::size_t i = 0; i < out.values.size(); ++i) {
            out.values[i] += w * a[i];
        }
    }
    const double correction = plan.self_nonosc - sampled_origin * vol;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        out.values[i] += correction * f.values[i];
    }
    return out;
}

/// Non-oscillatory + oscillatory real + i * imaginary.
inline Field apply_full(const Field& f, const ApplyPlan& plan) {
    detail::check_plan(plan, f);
    detail::check_resolution(plan.params, f);
    Field out = apply_nonoscillatory(f, plan);
    const Field smooth = detail::convolve_padded(f, plan.padding, plan.full_smooth_hat);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        out.values[i] += smooth.values[i];
    }
    return out;
}

/// Brute-force u(x) = sum_{y != x} f(y) G(|x - y|) h^d + f(x) S_h.
inline Field oracle_convolution(const Field& f, const KernelParams& params) {
    params.validate();
    f.validate();
    if (f.dims != params.d) {
        throw ConfigError("oracle_convolution: field dimension does not match params.d");
    }
    if (f.size() > kOracleBudget) {
        throw SizeError("oracle_convolution: grid exceeds the 64^3 brute-force budget");
    }
    const int d = f.dims;
    const double h = f.spacing;
    const double vol = detail::cell_volume(d, h);
    // Kernel table over offset vectors |o_a| < N_a.
    std::vector<std::size_t> span(d);
    std::size_t table_size = 1;
    for (int a = 0; a < d; ++a) {
        span[a] = 2 * f.shape[a] - 1;
        table_size *= span[a];
    }
    std::vector<cplx> table(table_size);
    for (std::size_t t = 0; t < table_size; ++t) {
        std::size_t rest = t;
        double r2 = 0.0;
        for (int a = d - 1; a >= 0; --a) {
            const auto i = static_cast<long>(rest % span[a]);
            rest /= span[a];
            const long off = i - static_cast<long>(f.shape[a]) + 1;
            r2 += static_cast<double>(off * off);
        }
        if (r2 == 0.0) {
            table[t] = cplx(detail::self_cell_real(params, h), detail::imag_kernel(params, 0.0) * vol);
        } else {
            const double r = h * std::sqrt(r2);
            table[t] = cplx(detail::real_kernel(params, r), detail::imag_kernel(params, r)) * vol;
        }
    }
    std::vector<std::vector<long>> index(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto idx = f.unflatten(i);
        index[i].assign(idx.begin(), idx.end());
    }
    Field out = f;
    std::vector<std::size_t> sources;
    for (std::size_t j = 0; j < f.size(); ++j) {
        if (f.values[j] != cplx{}) {
            sources.push_back(j);
        }
    }
    for (std::size_t i = 0; i < f.size(); ++i) {
        cplx acc{};
        for (std::size_t j : sources) {
            std::size_t t = 0;
            for (int a = 0; a < d; ++a) {
                t = t * span[a] + static_cast<std::size_t>(index[i][a] - index[j][a] + static_cast<long>(f.shape[a]) - 1);
            }
            acc += table[t] * f.values[j];
        }
        out.values[i] = acc;
    }
    return out;
}

/// ||(Delta_h + k^2) u + f|| / ||f|| over interior samples (second-order Laplacian).
inline double helmholtz_residual(const Field& u, const Field& f, double k) {
    if (!u.same_grid(f)) {
        throw ConfigError("helmholtz_residual: grids differ");
    }
    const int d = u.dims;
    const double h2 = u.spacing * u.spacing;
    std::vector<std::size_t> stride(d, 1);
    for (int a = d - 2; a >= 0; --a) {
        stride[a] = stride[a + 1] * u.shape[a + 1];
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const auto idx = u.unflatten(i);
        bool interior = true;
        for (int a = 0; a < d; ++a) {
            interior = interior && idx[a] > 0 && idx[a] + 1 < u.shape[a];
        }
        if (!interior) {
            continue;
        }
        cplx lap = -2.0 * d * u.values[i];
        for (int a = 0; a < d; ++a) {
            lap += u.values[i + stride[a]] + u.values[i - stride[a]];
        }
        const cplx res = lap / h2 + k * k * u.values[i] + f.values[i];
        num += std::norm(res);
        den += std::norm(f.values[i]);
    }
    if (den == 0.0) {
        throw ConfigError("helmholtz_residual: source vanishes on the interior");
    }
    return std::sqrt(num / den);
}

/// Largest relative mismatch of multiplier_truncated + ghat_n against the exact
/// symbol over the padded grid's radial frequencies with |p - k| > 10 e^{-t_max/2}.
inline double recombination_error(const ApplyPlan& plan) {
    const auto& p = plan.params;
    const int d = p.d;
    const std::size_t longest = *std::max_element(plan.shape.begin(), plan.shape.end());
    const int m = static_cast<int>(longest + plan.padding);
    const double dp = 2.0 * M_PI / (static_cast<double>(m) * plan.spacing);
    const double gap = 10.0 * std::exp(-0.5 * plan.scales.t_max);
    double worst = 0.0;
    // radial frequencies |p| = dp sqrt(i^2 + j^2 (+ l^2)) with |i|,|j|,|l| <= m/2
    const int half = m / 2;
    for (int i = 0; i <= half; ++i) {
        for (int j = i; j <= half; ++j) {
            for (int l = (d == 3 ? j : 0); l <= (d == 3 ? half : 0); ++l) {
                const double pr = dp * std::sqrt(double(i) * i + double(j) * j + double(l) * l);
                if (std::abs(pr - p.k) <= gap) {
                    continue;
                }
                const double exact = fourier::symbol_exact(pr, p);
                const double split = fourier::multiplier_truncated(pr, p, plan.scales) +
                                     fourier::symbol_nonoscillatory(pr, p);
                worst = std::max(worst, std::abs(split - exact) / std::abs(exact));
            }
        }
    }
    return worst;
}

}  // namespace helmsplit::grid
