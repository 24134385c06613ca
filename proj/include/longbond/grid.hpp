/**
 * @file grid.hpp
 * @brief Uniform time grid on [0, horizon]
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "longbond/errors.hpp"

namespace longbond {

/// Uniform grid t_i = i * dt, i = 0..steps, with t_steps = horizon exactly.
///
/// Times are derived from (horizon, steps) instead of stored, so two grids
/// with the same parameters are bitwise-identical.
class TimeGrid {
    double horizon_ = 1.0;
    std::size_t steps_ = 1;

public:
    TimeGrid(double horizon, std::size_t steps) : horizon_(horizon), steps_(steps) {
        if (!(horizon > 0.0)) throw InvalidParameter("TimeGrid: horizon must be > 0");
        if (steps == 0) throw InvalidParameter("TimeGrid: need at least one step");
    }

    /// Grid with nominal step dt; dt must divide the horizon to ~1e-12
    static TimeGrid with_step(double horizon, double dt) {
        if (!(dt > 0.0)) throw InvalidParameter("TimeGrid: dt must be > 0");
        const double n_real = horizon / dt;
        const auto n = static_cast<std::size_t>(std::llround(n_real));
        if (n == 0 || std::fabs(n_real - static_cast<double>(n)) > 1e-9) {
            throw InvalidParameter("TimeGrid: dt does not divide the horizon");
        }
        return TimeGrid(horizon, n);
    }

    double horizon() const { return horizon_; }
    std::size_t steps() const { return steps_; }
    std::size_t nodes() const { return steps_ + 1; }
    double dt() const { return horizon_ / static_cast<double>(steps_); }

    double time(std::size_t i) const {
        return i == steps_ ? horizon_ : static_cast<double>(i) * dt();
    }

    /// Node index of time t; throws OffGridTime when t is not a node
    std::size_t index_of(double t) const {
        const double i_real = t / dt();
        const auto i = static_cast<std::size_t>(std::llround(i_real));
        if (i > steps_ || std::fabs(time(i) - t) > 1e-9) {
            throw OffGridTime("time " + std::to_string(t) + " is not a grid node");
        }
        return i;
    }

    bool operator==(const TimeGrid& o) const {
        return horizon_ == o.horizon_ && steps_ == o.steps_;
    }
};

}  // namespace longbond
