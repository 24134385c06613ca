/**
 * @file path.hpp
 * @brief Brownian path with the exponential martingale M and its time integral A
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "longbond/errors.hpp"
#include "longbond/grid.hpp"
#include "longbond/params.hpp"
#include "longbond/rng.hpp"

namespace longbond {

/// Per-node state of one simulated path.
///
/// Invariants: B[0]=0, M[0]=1, A[0]=0; M > 0; A non-decreasing;
/// M[i] = exp(sigma B[i] - sigma^2 t_i / 2) up to roundoff.
/// Open aggregate so tests can build synthetic nodes directly.
struct PathState {
    TimeGrid grid;
    std::vector<double> B;
    std::vector<double> M;
    std::vector<double> A;

    /// Subsample every stride-th node; A is re-accumulated by the trapezoid
    /// rule on the subsampled M so the result equals a direct coarse-grid
    /// simulation driven by the pairwise-summed Brownian increments.
    PathState coarsen(std::size_t stride) const {
        if (stride == 0 || grid.steps() % stride != 0) {
            throw InvalidParameter("coarsen: stride must divide the step count");
        }
        PathState out{TimeGrid(grid.horizon(), grid.steps() / stride), {}, {}, {}};
        const std::size_t n = out.grid.steps();
        out.B.reserve(n + 1);
        out.M.reserve(n + 1);
        out.A.reserve(n + 1);
        const double dtc = out.grid.dt();
        double a = 0.0;
        for (std::size_t j = 0; j <= n; ++j) {
            const std::size_t i = j * stride;
            out.B.push_back(B[i]);
            out.M.push_back(M[i]);
            if (j > 0) a += dtc * 0.5 * (out.M[j - 1] + out.M[j]);
            out.A.push_back(a);
        }
        return out;
    }
};

/// Walk a fresh path node by node without storing it.
///
/// M uses the exact per-step update M exp(sigma dB - sigma^2 dt / 2), so
/// E[M_t] = 1 holds exactly at every node; A accumulates by trapezoid.
/// The visitor receives (node index, t, B, M, A) for every node starting
/// at node 0 and returns false to stop early.
template <class Visitor>
void walk_path(double sigma, const TimeGrid& grid, PathRng& rng, Visitor&& visit) {
    const double dt = grid.dt();
    const double sqdt = std::sqrt(dt);
    const double drift = -0.5 * sigma * sigma * dt;
    double b = 0.0, m = 1.0, a = 0.0;
    if (!visit(std::size_t{0}, 0.0, b, m, a)) return;
    for (std::size_t i = 1; i <= grid.steps(); ++i) {
        const double db = sqdt * rng.gaussian();
        const double m_next = m * std::exp(sigma * db + drift);
        a += dt * 0.5 * (m + m_next);
        b += db;
        m = m_next;
        if (!visit(i, grid.time(i), b, m, a)) return;
    }
}

/// Simulate and store one full path; deterministic given (seed, path_index)
inline PathState simulate_path(const ModelParams& params, const TimeGrid& grid,
                               std::uint64_t seed, std::uint64_t path_index = 0) {
    PathState path{grid, {}, {}, {}};
    path.B.reserve(grid.nodes());
    path.M.reserve(grid.nodes());
    path.A.reserve(grid.nodes());
    PathRng rng(seed, path_index);
    walk_path(params.sigma, grid, rng, [&](std::size_t, double, double b, double m, double a) {
        path.B.push_back(b);
        path.M.push_back(m);
        path.A.push_back(a);
        return true;
    });
    return path;
}

}  // namespace longbond
