#include <cmath>
#include <utility>

#include <gtest/gtest.h>

#include "helmsplit/specfun.hpp"

using namespace helmsplit;
using namespace helmsplit::specfun;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Specfun, J0Values) {
    EXPECT_EQ(bessel_j0(0.0), 1.0);
    EXPECT_LE(rel(bessel_j0(1.0), 0.7651976865579666), 1e-15);
    EXPECT_LE(std::abs(bessel_j0(2.404825557695773)), 1e-12);
}

TEST(Specfun, Y0Values) {
    EXPECT_LE(rel(bessel_y0(1.0), 0.08825696421567696), 1e-14);
    EXPECT_LE(std::abs(bessel_y0(0.893576966279167543)), 1e-12);
    EXPECT_LT(bessel_y0(1e-8), -11.0);
}

TEST(Specfun, KValues) {
    EXPECT_LE(rel(bessel_k(0, 1.0), 0.42102443824070834), 1e-15);
    EXPECT_LE(rel(bessel_k(1, 1.0), 0.6019072301972346), 1e-15);
    EXPECT_LE(rel(bessel_k(5, 0.5), 12097.979476096393394), 1e-13);
    EXPECT_LE(rel(bessel_k(16, 2.0), 611765693528.06152418), 1e-13);
    EXPECT_LE(rel(bessel_k(32, 10.0), 79662858667.690550864), 1e-13);
    EXPECT_LE(rel(bessel_k(8, 30.0), 6.0565817824131864255e-14), 1e-13);
    EXPECT_LE(rel(bessel_k(2, 1e-3), 1999999.5000009716277), 1e-13);
}

TEST(Specfun, KLargeArgumentAsymptotic) {
    for (int j : {0, 1}) {
        const double x = 50.0;
        const double asym = std::sqrt(M_PI / (2.0 * x)) * std::exp(-x);
        EXPECT_NEAR(bessel_k(j, x) / asym, 1.0, 0.01);
    }
}

TEST(Specfun, KRecurrence) {
    for (double x : {0.01, 0.1, 0.5, 1.0, 3.0, 10.0, 25.0, 50.0}) {
        for (int j = 1; j <= 16; ++j) {
            const double lhs = bessel_k(j + 1, x);
            const double rhs = bessel_k(j - 1, x) + 2.0 * j / x * bessel_k(j, x);
            EXPECT_LE(rel(rhs, lhs), 1e-12) << "j=" << j << " x=" << x;
        }
    }
}

TEST(Specfun, KPositiveDecreasing) {
    for (int j = 0; j <= 16; ++j) {
        double prev = bessel_k(j, 0.01);
        for (double x = 0.05; x < 50.0; x *= 1.5) {
            const double v = bessel_k(j, x);
            EXPECT_GT(v, 0.0);
            EXPECT_LT(v, prev);
            prev = v;
        }
    }
}

TEST(Specfun, BesselOdeResidual) {
    const double h = 1e-5;
    for (double x = 0.5; x <= 20.0; x += 0.25) {
        // f'' from the analytic derivative f' = -J1 (-Y1) avoids a second difference
        const std::pair<double (*)(double), double (*)(double)> pairs[] = {{bessel_j0, bessel_j1},
                                                                           {bessel_y0, bessel_y1}};
        for (auto [f, g] : pairs) {
            const double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
            const double d2 = -(g(x + h) - g(x - h)) / (2.0 * h);
            EXPECT_LE(std::abs(x * x * d2 + x * d1 + x * x * f(x)), 1e-8 * std::max(1.0, x * x)) << x;
        }
    }
}

TEST(Specfun, DomainErrors) {
    EXPECT_THROW(bessel_j0(-1.0), DomainError);
    EXPECT_THROW(bessel_y0(0.0), DomainError);
    EXPECT_THROW(bessel_y0(-1.0), DomainError);
    EXPECT_THROW(bessel_k(0, 0.0), DomainError);
    EXPECT_THROW(bessel_k(-1, 1.0), DomainError);
    EXPECT_THROW(bessel_j0(std::nan("")), DomainError);
}

TEST(Specfun, RangeErrors) {
    EXPECT_NO_THROW(bessel_k(64, 1e-3));
    EXPECT_THROW(bessel_k(64, 1e-4), RangeError);
}

TEST(Specfun, AccuracyContract) {
    EXPECT_TRUE(kAccuracy.valid());
    EXPECT_FALSE((SpecfunAccuracy{1e-9}).valid());
}
