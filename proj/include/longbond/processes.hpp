/**
 * @file processes.hpp
 * @brief Y processes (log discounted prices) and level-crossing stopping times
 */

#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "longbond/errors.hpp"
#include "longbond/params.hpp"
#include "longbond/path.hpp"

namespace longbond {

/// Y at one node: 2 M x0 / (2 + sigma^2 A x0).
///
/// Algebraically 2M / (2 x0^{-1} + sigma^2 A), written without the
/// reciprocal so x0 = 0 maps to 0 instead of dividing by infinity.
inline double y_value(double x0, double m, double a, double sigma) {
    return 2.0 * m * x0 / (2.0 + sigma * sigma * a * x0);
}

/// Y series along a path; exploded_at marks the minus-sign variant's blow-up
struct YSeries {
    double x0 = 0.0;
    std::vector<double> values;
    std::optional<std::size_t> exploded_at;
};

/// Y_t = 2M_t / (2 x0^{-1} + sigma^2 A_t): exponent of the stochastic
/// exponential driving every discounted bond price. Requires x0 > 0.
inline YSeries y_process(double x0, const PathState& path, const ModelParams& params) {
    if (!(x0 > 0.0)) throw NonPositiveInitial("y_process: x0 must be > 0");
    YSeries out;
    out.x0 = x0;
    out.values.reserve(path.M.size());
    for (std::size_t i = 0; i < path.M.size(); ++i) {
        out.values.push_back(y_value(x0, path.M[i], path.A[i], params.sigma));
    }
    return out;
}

/// Minus-sign variant 2M / (2 x0^{-1} - sigma^2 A): hits +infinity when
/// sigma^2 A reaches 2/x0. Explosion is data, not an error: values from the
/// first offending node on are +inf and exploded_at records the index.
inline YSeries y_process_exploding(double x0, const PathState& path, const ModelParams& params) {
    if (!(x0 > 0.0)) throw NonPositiveInitial("y_process_exploding: x0 must be > 0");
    const double s2 = params.sigma * params.sigma;
    const double thr = 2.0 / x0;
    YSeries out;
    out.x0 = x0;
    out.values.reserve(path.M.size());
    for (std::size_t i = 0; i < path.M.size(); ++i) {
        const double denom = thr - s2 * path.A[i];
        if (denom <= 0.0) {
            if (!out.exploded_at) out.exploded_at = i;
            out.values.push_back(std::numeric_limits<double>::infinity());
        } else {
            out.values.push_back(2.0 * path.M[i] / denom);
        }
    }
    return out;
}

/// Result of scanning for a level crossing
struct StopHit {
    std::size_t index;  // first node with Y >= level, or the last node
    bool triggered;
};

/// First grid node where Y_t(x0) >= level; caps at the final node when the
/// level is never reached
inline StopHit stopping_time_level(const PathState& path, const ModelParams& params, double x0,
                                   double level) {
    if (!(x0 > 0.0)) throw NonPositiveInitial("stopping_time_level: x0 must be > 0");
    if (!(level > 0.0)) throw InvalidParameter("stopping_time_level: level must be > 0");
    for (std::size_t i = 0; i < path.M.size(); ++i) {
        if (y_value(x0, path.M[i], path.A[i], params.sigma) >= level) return {i, true};
    }
    return {path.M.size() - 1, false};
}

}  // namespace longbond
