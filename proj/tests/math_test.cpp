#include "longbond/math.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "longbond/errors.hpp"

namespace lb = longbond;

TEST(NormalCdf, KnownValues) {
    EXPECT_DOUBLE_EQ(lb::normal_cdf(0.0), 0.5);
    EXPECT_NEAR(lb::normal_cdf(1.0), 0.841344746068542949, 1e-15);
    EXPECT_NEAR(lb::normal_cdf(-1.0), 0.158655253931457051, 1e-15);
    EXPECT_NEAR(lb::normal_cdf(1.959963984540054), 0.975, 1e-15);
}

TEST(NormalQuantile, KnownValues) {
    EXPECT_NEAR(lb::normal_quantile(0.5), 0.0, 1e-15);
    EXPECT_NEAR(lb::normal_quantile(0.975), 1.959963984540054, 2e-15);
    EXPECT_NEAR(lb::normal_quantile(0.841344746068542949), 1.0, 2e-15);
}

TEST(NormalQuantile, RoundTripsThroughCdf) {
    for (double u = 0.02; u < 1.0; u += 0.02) {
        EXPECT_NEAR(lb::normal_cdf(lb::normal_quantile(u)), u, 1e-14) << "u=" << u;
    }
    // tails
    EXPECT_NEAR(lb::normal_cdf(lb::normal_quantile(1e-10)), 1e-10, 1e-18);
    EXPECT_NEAR(lb::normal_cdf(lb::normal_quantile(1e-300)), 1e-300, 1e-306);
}

TEST(NormalQuantile, RejectsOutOfRange) {
    EXPECT_THROW(lb::normal_quantile(0.0), lb::InvalidParameter);
    EXPECT_THROW(lb::normal_quantile(1.0), lb::InvalidParameter);
    EXPECT_THROW(lb::normal_quantile(-0.1), lb::InvalidParameter);
}

TEST(KahanSum, CompensatesSmallTerms) {
    lb::KahanSum s;
    s.add(1.0);
    for (int i = 0; i < 1000000; ++i) s.add(1e-16);
    EXPECT_NEAR(s.value(), 1.0 + 1e-10, 1e-22);
}

TEST(AdaptiveSimpson, Polynomial) {
    const double got = lb::adaptive_simpson([](double x) { return x * x; }, 0.0, 1.0, 1e-12);
    EXPECT_NEAR(got, 1.0 / 3.0, 1e-12);
}

TEST(AdaptiveSimpson, Exponential) {
    const double got = lb::adaptive_simpson([](double x) { return std::exp(x); }, 0.0, 2.0, 1e-10);
    EXPECT_NEAR(got, std::exp(2.0) - 1.0, 1e-9);
}

TEST(AdaptiveSimpson, SteepIntegrand) {
    // integral of 1/(2 sqrt(x)) on [eps, 1] with a near-singular left edge
    const double got =
        lb::adaptive_simpson([](double x) { return 0.5 / std::sqrt(x); }, 1e-8, 1.0, 1e-9);
    EXPECT_NEAR(got, 1.0 - 1e-4, 1e-7);
}

TEST(AdaptiveSimpson, EmptyInterval) {
    const double got = lb::adaptive_simpson([](double x) { return x; }, 2.0, 2.0, 1e-10);
    EXPECT_DOUBLE_EQ(got, 0.0);
}
