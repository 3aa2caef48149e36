#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "helmsplit/fourier_kernels.hpp"

using namespace helmsplit;
using namespace helmsplit::fourier;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Symbols, ExactValues) {
    const auto p1 = make_params(1.0, 1, 3);
    EXPECT_DOUBLE_EQ(symbol_exact(2.0, p1), 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(symbol_exact(0.0, p1), -1.0);
    EXPECT_THROW(symbol_exact(1.0, p1), PoleError);
    EXPECT_THROW(symbol_exact(-1.0, p1), DomainError);
}

TEST(Symbols, NonoscillatoryValues) {
    EXPECT_DOUBLE_EQ(symbol_nonoscillatory(1.0, make_params(1.0, 2, 3)), 1.0);
    EXPECT_DOUBLE_EQ(symbol_nonoscillatory(1.0, make_params(1.0, 1, 3)), 0.5);
    EXPECT_LE(rel(symbol_nonoscillatory(2.0, make_params(1.0, 3, 3)), 39.0 / 125.0), 1e-15);
}

TEST(Symbols, OscillatoryValues) {
    EXPECT_LE(rel(symbol_oscillatory(2.0, make_params(1.0, 3, 3)), 8.0 / 375.0), 1e-14);
    EXPECT_LE(rel(symbol_oscillatory(10.0, make_params(1.0, 1, 3)), (2.0 / 101.0) / 99.0), 1e-14);
    EXPECT_THROW(symbol_oscillatory(1.0, make_params(1.0, 1, 3)), PoleError);
}

TEST(Symbols, SplitIdentityRandom) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> logk(-3.0, 3.0), logratio(-2.0, 2.0);
    std::uniform_int_distribution<int> order(1, 16);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double k = std::pow(10.0, logk(rng));
        const double p = k * std::pow(10.0, logratio(rng));
        if (std::abs(p - k) <= 1e-6 * k) {
            continue;
        }
        const auto params = make_params(k, order(rng), 3);
        const double e = symbol_exact(p, params);
        const double a = symbol_nonoscillatory(p, params);
        const double b = symbol_oscillatory(p, params);
        const double scale = std::max({std::abs(e), std::abs(a), std::abs(b)});
        worst = std::max(worst, std::abs(e - a - b) / scale);
    }
    EXPECT_LE(worst, 1e-13);
}

TEST(Symbols, OscillatoryDecay) {
    for (int n : {1, 3, 6}) {
        const auto params = make_params(1.0, n, 3);
        const double a = symbol_oscillatory(1e3, params) * std::pow(1e3, 2 * n + 2);
        const double b = symbol_oscillatory(1e4, params) * std::pow(1e4, 2 * n + 2);
        EXPECT_NEAR(b / a, 1.0, 0.1);
    }
}

TEST(Symbols, LambdaLimit) {
    const auto params = make_params(1.0, 2, 3);
    const auto z = symbol_lambda(2.0, params, 1e-8);
    EXPECT_NEAR(z.real(), 1.0 / 3.0, 1e-12);
    EXPECT_LE(std::abs(z.imag()), 1e-8);

    // order of convergence in lambda at fixed p
    const double exact = symbol_exact(0.7, params);
    const double e2 = std::abs(symbol_lambda(0.7, params, 1e-2).real() - exact);
    const double e3 = std::abs(symbol_lambda(0.7, params, 1e-3).real() - exact);
    const double e4 = std::abs(symbol_lambda(0.7, params, 1e-4).real() - exact);
    EXPECT_GE(std::log10(e2 / e3), 1.9);
    EXPECT_GE(std::log10(e3 / e4), 1.9);
}

TEST(Symbols, LambdaAtPole) {
    const double k = 1.5, l = 0.3;
    const auto z = symbol_lambda(k, make_params(k, 1, 3), l);
    EXPECT_LE(rel(z.real(), 1.0 / (2 * k) * (2 * k / (4 * k * k + l * l))), 1e-14);
    EXPECT_LE(rel(z.imag(), 1.0 / (2 * k) * (l / (l * l) - l / (4 * k * k + l * l))), 1e-14);
}

TEST(Symbols, LambdaAtZero) {
    const auto params = make_params(1.0, 1, 3);
    const auto z0 = symbol_lambda(0.0, params, 1.0);
    // -1/(k + i lambda)^2 with k = lambda = 1 is -1/(2i) = i/2
    EXPECT_NEAR(z0.real(), 0.0, 1e-15);
    EXPECT_NEAR(z0.imag(), 0.5, 1e-15);
    const auto z1 = symbol_lambda(1e-4, params, 1.0);
    EXPECT_NEAR(z1.real(), z0.real(), 1e-7);
    EXPECT_NEAR(z1.imag(), z0.imag(), 1e-7);
    EXPECT_THROW(symbol_lambda(1.0, params, 0.0), DomainError);
}

TEST(Multiplier, MatchesClosedForm) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(0.0, 4.0);
    const auto params = make_params(1.0, 3, 3);
    const TruncatedScaleRange scales{-40.0, 10.0, 0.25};
    int taken = 0;
    while (taken < 100) {
        const double p = unif(rng);
        const double exact = multiplier_truncated_exact(p, params, scales.t_min, scales.t_max);
        const double ends = std::max(std::abs(multiplier_integrand(p, params, scales.t_min)),
                                     std::abs(multiplier_integrand(p, params, scales.t_max)));
        if (!(ends < 1e-14 * std::abs(exact))) {
            continue;  // the endpoint term of the rule is not negligible near the pole
        }
        ++taken;
        EXPECT_LE(scaled_difference(multiplier_truncated(p, params, scales), exact, params.k), 1e-10) << p;
    }
}

TEST(Multiplier, ConvergesToOscillatorySymbolAwayFromPole) {
    const auto params = make_params(2.0, 2, 3);
    const TruncatedScaleRange scales{-40.0, 8.0, 0.25};
    const double s1 = std::exp(scales.t_max);
    for (double p = 0.05; p < 8.0; p += 0.173) {
        if (s1 * (p - params.k) * (p - params.k) <= 40.0) {
            continue;
        }
        EXPECT_LE(rel(multiplier_truncated(p, params, scales), symbol_oscillatory(p, params)), 1e-9) << p;
    }
}

TEST(Multiplier, ContinuousAtPole) {
    // the slope at the pole grows like e^{t_max}; a short range keeps it order one
    const auto params = make_params(1.0, 2, 3);
    const TruncatedScaleRange scales{-40.0, 2.0, 0.25};
    const double at = multiplier_truncated(1.0, params, scales);
    EXPECT_TRUE(std::isfinite(at));
    const double lo = multiplier_truncated(1.0 - 1e-10, params, scales);
    const double hi = multiplier_truncated(1.0 + 1e-10, params, scales);
    EXPECT_LE(std::abs(lo - hi), 1e-8 * std::abs(at));
}

TEST(Multiplier, SmallFrequencyLimit) {
    const auto params = make_params(1.0, 2, 3);
    const TruncatedScaleRange scales{-40.0, 10.0, 0.25};
    const double at0 = multiplier_truncated_exact(0.0, params, scales.t_min, scales.t_max);
    const double near = multiplier_truncated_exact(1e-5, params, scales.t_min, scales.t_max);
    EXPECT_LE(rel(near, at0), 1e-8);
    EXPECT_LE(rel(multiplier_truncated(0.0, params, scales), at0), 1e-10);
}

TEST(ScaleRange, Validation) {
    EXPECT_THROW((TruncatedScaleRange{1.0, 0.0, 0.25}.validate()), ConfigError);
    EXPECT_THROW((TruncatedScaleRange{0.0, 1.0, 0.0}.validate()), ConfigError);
    EXPECT_THROW((TruncatedScaleRange{0.0, 0.1, 0.25}.validate()), ConfigError);
    const auto params = make_params(1.0, 2, 3);
    EXPECT_THROW(choose_scale_range(params, 0.0, 1e-10), ConfigError);
    EXPECT_THROW(choose_scale_range(params, 0.1, 0.0), ConfigError);
    EXPECT_THROW(choose_scale_range(params, 1e8, 1e-10), ConfigError);
}

class ScaleRangeSweep : public ::testing::TestWithParam<int> {};

TEST_P(ScaleRangeSweep, RuleIsConverged) {
    const auto params = make_params(3.0, GetParam(), 3);
    const double eps = 1e-10;
    const double dp = 0.05;
    const auto r = choose_scale_range(params, dp, eps);
    std::mt19937_64 rng(GetParam());
    std::uniform_real_distribution<double> unif(0.0, 4.0 * params.k);
    const double gap = 10.0 * std::exp(-0.5 * r.t_max);
    for (int i = 0; i < 100; ++i) {
        const double p = unif(rng);
        const double base = multiplier_truncated(p, params, r);
        const double coarse = multiplier_truncated(p, params, {r.t_min - 2.0, r.t_max, r.step});
        EXPECT_LE(scaled_difference(base, coarse, params.k), eps) << "t_min - 2, p=" << p;
        // near the pole the integrand is still order one at t_max and the
        // endpoint term changes with the step, so both checks skip that band
        if (std::abs(p - params.k) > gap) {
            const double half = multiplier_truncated(p, params, {r.t_min, r.t_max, 0.5 * r.step});
            EXPECT_LE(scaled_difference(base, half, params.k), eps) << "halved step, p=" << p;
            const double fine = multiplier_truncated(p, params, {r.t_min, r.t_max + 2.0, r.step});
            EXPECT_LE(scaled_difference(base, fine, params.k), eps) << "t_max + 2, p=" << p;
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Orders, ScaleRangeSweep, ::testing::Values(1, 2, 4, 8));
