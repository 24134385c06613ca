/**
 * @file bonds.hpp
 * @brief Bond prices along a path: long bond, T-bonds, discounted prices
 */

#pragma once

#include <cmath>

#include "longbond/errors.hpp"
#include "longbond/params.hpp"
#include "longbond/path.hpp"
#include "longbond/processes.hpp"

namespace longbond {

/// A priced bond: observation time, maturity, model price
struct BondQuote {
    double t;
    double T;
    double price;
};

/// P(t, horizon) = exp(-Y_t(F(t))). Equals 1 at the horizon and P(0,horizon)
/// at t=0; strictly below 1 whenever F(t) > 0.
inline double long_bond_price(const ModelParams& params, const PathState& path, double t) {
    const std::size_t i = path.grid.index_of(t);
    return std::exp(-y_value(params.F(t), path.M[i], path.A[i], params.sigma));
}

/// P(t,T) = exp(Y_t(F(T)) - Y_t(F(t))), the log form of the price process;
/// pulls to par as t -> T and is positive on every path
inline double bond_price(const ModelParams& params, const PathState& path, double t, double T) {
    if (T > params.horizon() + 1e-12) {
        throw MaturityBeyondHorizon("bond_price: T exceeds the horizon");
    }
    if (t > T) throw BadMaturityOrder("bond_price: need t <= T");
    const std::size_t i = path.grid.index_of(t);
    const double m = path.M[i];
    const double a = path.A[i];
    return std::exp(y_value(params.F(T), m, a, params.sigma) -
                    y_value(params.F(t), m, a, params.sigma));
}

/// P(t,T) / P(t,horizon) = exp(Y_t(F(T))): a positive local martingale.
/// Degenerate flat segment with F(T) = 0 gives exactly 1.
inline double discounted_bond(const ModelParams& params, const PathState& path, double t,
                              double T) {
    if (T > params.horizon() + 1e-12) {
        throw MaturityBeyondHorizon("discounted_bond: T exceeds the horizon");
    }
    if (t > T) throw BadMaturityOrder("discounted_bond: need t <= T");
    const std::size_t i = path.grid.index_of(t);
    return std::exp(y_value(params.F(T), path.M[i], path.A[i], params.sigma));
}

/// Simple forward rate log(P(t,T1)/P(t,T2)) / (T2 - T1); strictly positive
/// whenever F(T1) > F(T2)
inline double nominal_forward_rate_simple(const ModelParams& params, const PathState& path,
                                          double t, double T1, double T2) {
    if (!(t <= T1 && T1 < T2)) throw BadMaturityOrder("need t <= T1 < T2");
    if (T2 > params.horizon() + 1e-12) {
        throw MaturityBeyondHorizon("nominal_forward_rate_simple: T2 exceeds the horizon");
    }
    const std::size_t i = path.grid.index_of(t);
    const double m = path.M[i];
    const double a = path.A[i];
    return (y_value(params.F(T1), m, a, params.sigma) -
            y_value(params.F(T2), m, a, params.sigma)) /
           (T2 - T1);
}

}  // namespace longbond
