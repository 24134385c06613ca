#include "longbond/processes.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "longbond/curve.hpp"
#include "longbond/mc.hpp"
#include "longbond/path.hpp"

namespace lb = longbond;

namespace {

lb::ModelParams flat_model(double sigma) {
    return lb::make_model(sigma, lb::InitialCurve::flat(0.05, 10.0));
}

// deterministic stand-in path with M = 1, A = t (the zero-noise limit)
lb::PathState unit_path(double horizon, std::size_t steps) {
    lb::PathState p{lb::TimeGrid(horizon, steps), {}, {}, {}};
    for (std::size_t i = 0; i <= steps; ++i) {
        p.B.push_back(0.0);
        p.M.push_back(1.0);
        p.A.push_back(p.grid.time(i));
    }
    return p;
}

}  // namespace

TEST(YValue, StableAtZeroAndMatchesReciprocalForm) {
    EXPECT_DOUBLE_EQ(lb::y_value(0.0, 1.7, 3.0, 1.0), 0.0);
    const double x0 = 0.4, m = 1.2, a = 3.0, sigma = 1.0;
    const double direct = 2.0 * m / (2.0 / x0 + sigma * sigma * a);
    EXPECT_NEAR(lb::y_value(x0, m, a, sigma), direct, 1e-15);
}

TEST(YValue, MonotoneInInitialValue) {
    // larger x0 gives a larger Y at every node, on any path
    const auto params = flat_model(1.0);
    const auto path = lb::simulate_path(params, lb::TimeGrid(5.0, 320), 17);
    for (std::size_t i = 0; i < path.M.size(); i += 16) {
        double prev = 0.0;
        for (double x0 : {0.1, 0.5, 1.0, 2.0, 5.0}) {
            const double y = lb::y_value(x0, path.M[i], path.A[i], 1.0);
            EXPECT_GE(y, prev);
            prev = y;
        }
    }
}

TEST(YProcess, MatchesNodewiseValues) {
    const auto params = flat_model(0.8);
    const auto path = lb::simulate_path(params, lb::TimeGrid(3.0, 192), 23);
    const auto y = lb::y_process(0.7, path, params);
    ASSERT_EQ(y.values.size(), path.M.size());
    EXPECT_FALSE(y.exploded_at.has_value());
    for (std::size_t i = 0; i < path.M.size(); ++i) {
        EXPECT_DOUBLE_EQ(y.values[i], lb::y_value(0.7, path.M[i], path.A[i], 0.8));
    }
    EXPECT_THROW(lb::y_process(0.0, path, params), lb::NonPositiveInitial);
    EXPECT_THROW(lb::y_process(-1.0, path, params), lb::NonPositiveInitial);
}

TEST(YProcessExploding, DeterministicLimitBlowsUpOnSchedule) {
    // with M = 1, A = t the minus-sign variant is 2 / (2/x0 - sigma^2 t):
    // finite before t* = 2 / (sigma^2 x0), +inf from the first node at or
    // past t* on
    const auto params = flat_model(1.0);
    const auto path = unit_path(5.0, 500);  // dt = 0.01
    const double x0 = 0.8;                  // t* = 2.5
    const auto y = lb::y_process_exploding(x0, path, params);
    ASSERT_TRUE(y.exploded_at.has_value());
    EXPECT_EQ(*y.exploded_at, 250u);
    EXPECT_TRUE(std::isinf(y.values[250]));
    EXPECT_TRUE(std::isinf(y.values[400]));
    EXPECT_TRUE(std::isfinite(y.values[249]));
    EXPECT_NEAR(y.values[100], 2.0 / (2.0 / x0 - 1.0), 1e-12);
    // the plus-sign variant stays finite on the same data
    const auto safe = lb::y_process(x0, path, params);
    EXPECT_FALSE(safe.exploded_at.has_value());
}

TEST(YProcessExploding, ExplosionIsExactlyTheIntegralCrossing) {
    // explosion of 2M/(2/x0 - sigma^2 A) happens exactly when
    // sigma^2 A reaches 2/x0; check the indicator pathwise and that the
    // event has a sensible frequency at these parameters
    const auto params = flat_model(1.0);
    const lb::TimeGrid grid(3.0, 768);
    const double x0 = 2.0;  // threshold: A >= 1
    int exploded = 0, crossed = 0;
    const int n = 4000;
    for (int p = 0; p < n; ++p) {
        const auto path = lb::simulate_path(params, grid, 31, p);
        const auto y = lb::y_process_exploding(x0, path, params);
        const bool e = y.exploded_at.has_value();
        const bool c = path.A.back() >= 2.0 / x0;
        EXPECT_EQ(e, c);
        exploded += e;
        crossed += c;
    }
    EXPECT_EQ(exploded, crossed);
    EXPECT_GT(exploded, 0);
    EXPECT_LT(exploded, n);
}

TEST(StoppingTimeLevel, FirstCrossingOnAHandmadePath) {
    // M ramps linearly, A stays 0: Y = M x0, crossing is easy to place
    lb::PathState p{lb::TimeGrid(1.0, 10), std::vector<double>(11, 0.0), {}, std::vector<double>(11, 0.0)};
    for (int i = 0; i <= 10; ++i) p.M.push_back(1.0 + 0.1 * i);
    const auto params = flat_model(1.0);
    const auto hit = lb::stopping_time_level(p, params, 1.0, 1.55);
    EXPECT_TRUE(hit.triggered);
    EXPECT_EQ(hit.index, 6u);  // first node with M >= 1.55
    const auto miss = lb::stopping_time_level(p, params, 1.0, 5.0);
    EXPECT_FALSE(miss.triggered);
    EXPECT_EQ(miss.index, 10u);
    EXPECT_THROW(lb::stopping_time_level(p, params, 0.0, 1.0), lb::NonPositiveInitial);
    EXPECT_THROW(lb::stopping_time_level(p, params, 1.0, 0.0), lb::InvalidParameter);
}
