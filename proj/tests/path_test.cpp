#include "longbond/path.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "longbond/curve.hpp"
#include "longbond/mc.hpp"
#include "longbond/params.hpp"

namespace lb = longbond;

namespace {

lb::ModelParams flat_model(double sigma) {
    return lb::make_model(sigma, lb::InitialCurve::flat(0.05, 10.0));
}

}  // namespace

TEST(SimulatePath, StartsAtTheRightState) {
    const auto p = lb::simulate_path(flat_model(1.0), lb::TimeGrid(2.0, 128), 42);
    ASSERT_EQ(p.B.size(), 129u);
    EXPECT_DOUBLE_EQ(p.B[0], 0.0);
    EXPECT_DOUBLE_EQ(p.M[0], 1.0);
    EXPECT_DOUBLE_EQ(p.A[0], 0.0);
}

TEST(SimulatePath, InvariantsHoldAlongThePath) {
    const double sigma = 0.7;
    const auto p = lb::simulate_path(flat_model(sigma), lb::TimeGrid(5.0, 640), 7);
    for (std::size_t i = 1; i < p.M.size(); ++i) {
        EXPECT_GT(p.M[i], 0.0);
        EXPECT_GE(p.A[i], p.A[i - 1]);
        // M is the exact exponential of the accumulated Brownian motion
        const double t = p.grid.time(i);
        EXPECT_NEAR(p.M[i], std::exp(sigma * p.B[i] - 0.5 * sigma * sigma * t), 1e-9 * p.M[i]);
    }
}

TEST(SimulatePath, DeterministicInSeedAndPathIndex) {
    const auto a = lb::simulate_path(flat_model(1.0), lb::TimeGrid(1.0, 64), 9, 3);
    const auto b = lb::simulate_path(flat_model(1.0), lb::TimeGrid(1.0, 64), 9, 3);
    const auto c = lb::simulate_path(flat_model(1.0), lb::TimeGrid(1.0, 64), 9, 4);
    EXPECT_EQ(a.B, b.B);
    EXPECT_EQ(a.M, b.M);
    EXPECT_EQ(a.A, b.A);
    EXPECT_NE(a.B, c.B);
}

TEST(SimulatePath, ExponentialMartingaleHasUnitMean) {
    // E[M_1] = 1 within 3 stderr at sigma = 1, 1e5 paths
    const lb::TimeGrid grid(1.0, 1024);
    const lb::MCConfig mc{100000, 2024, 1};
    const auto est = lb::ensemble_mean(mc, [&](lb::PathRng& rng, std::uint64_t) {
        double last = 1.0;
        lb::walk_path(1.0, grid, rng, [&](std::size_t, double, double, double m, double) {
            last = m;
            return true;
        });
        return last;
    });
    EXPECT_NEAR(est.mean, 1.0, 3.0 * est.std_err);
    EXPECT_GT(est.std_err, 0.0);
}

TEST(Coarsen, SubsamplesStateAndReaccumulatesA) {
    const auto fine = lb::simulate_path(flat_model(1.0), lb::TimeGrid(2.0, 256), 11);
    const auto coarse = fine.coarsen(4);
    ASSERT_EQ(coarse.grid.steps(), 64u);
    for (std::size_t j = 0; j <= 64; ++j) {
        EXPECT_DOUBLE_EQ(coarse.B[j], fine.B[4 * j]);
        EXPECT_DOUBLE_EQ(coarse.M[j], fine.M[4 * j]);
    }
    // A re-accumulated on the coarse grid: trapezoid of coarse M
    double a = 0.0;
    for (std::size_t j = 1; j <= 64; ++j) {
        a += coarse.grid.dt() * 0.5 * (coarse.M[j - 1] + coarse.M[j]);
        EXPECT_NEAR(coarse.A[j], a, 1e-14);
    }
    EXPECT_THROW(fine.coarsen(0), lb::InvalidParameter);
    EXPECT_THROW(fine.coarsen(3), lb::InvalidParameter);
}

TEST(EnsembleMean, DeterministicAcrossThreadCounts) {
    const lb::TimeGrid grid(1.0, 32);
    auto stat = [&](lb::PathRng& rng, std::uint64_t) {
        double last = 1.0;
        lb::walk_path(1.0, grid, rng, [&](std::size_t, double, double, double m, double) {
            last = m;
            return true;
        });
        return last;
    };
    const auto one = lb::ensemble_mean(lb::MCConfig{20000, 5, 1}, stat);
    const auto four = lb::ensemble_mean(lb::MCConfig{20000, 5, 4}, stat);
    EXPECT_EQ(one.mean, four.mean);  // bitwise: chunked reduction fixes the order
    EXPECT_EQ(one.std_err, four.std_err);
}
