/**
 * @file rates.hpp
 * @brief Instantaneous forward rates, spot rate, and the analytic identities
 *        tying them back to bond prices. Everything here needs an absolutely
 *        continuous forward curve.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "longbond/bonds.hpp"
#include "longbond/errors.hpp"
#include "longbond/math.hpp"
#include "longbond/params.hpp"
#include "longbond/path.hpp"
#include "longbond/processes.hpp"

namespace longbond {

/// A rate observation: time, maturity, per-year intensity
struct RateQuote {
    double t;
    double T;
    double rate;
};

namespace detail {

// r(t,T) from node values: 4 f(T) M / (2 + sigma^2 F(T) A)^2
inline double forward_rate_node(double f_T, double F_T, double m, double a, double sigma) {
    const double denom = 2.0 + sigma * sigma * F_T * a;
    return 4.0 * f_T * m / (denom * denom);
}

}  // namespace detail

/// Instantaneous forward rate r(t,T).
///
/// Evaluates both published forms, 4 f(T) M / (2 + sigma^2 F(T) A)^2 and
/// f(T) Y^2 / (M F(T)^2), and insists they agree to 1e-10 relative; they are
/// algebraically identical, so a mismatch means a broken build.
inline RateQuote forward_rate(const ModelParams& params, const PathState& path, double t,
                              double T) {
    if (t > T) throw BadMaturityOrder("forward_rate: need t <= T");
    if (T > params.horizon() + 1e-12) {
        throw MaturityBeyondHorizon("forward_rate: T exceeds the horizon");
    }
    const std::size_t i = path.grid.index_of(t);
    const double m = path.M[i];
    const double a = path.A[i];
    const double F_T = params.F(T);
    const double f_T = params.forward.density(T);
    const double rate = detail::forward_rate_node(f_T, F_T, m, a, params.sigma);
    if (F_T > 1e-8) {
        const double y = y_value(F_T, m, a, params.sigma);
        const double alt = f_T * y * y / (m * F_T * F_T);
        if (std::fabs(alt - rate) > 1e-10 * std::max(1.0, std::fabs(rate))) {
            throw Error("forward_rate: dual formulas disagree");
        }
    }
    return RateQuote{t, T, rate};
}

/// Spot rate r(t) = 4 f(t) M / (2 + sigma^2 F(t) A)^2. At a table-scheme knot
/// the density is the right limit f(t+).
inline RateQuote spot_rate(const ModelParams& params, const PathState& path, double t) {
    if (!(t < params.horizon())) throw InvalidParameter("spot_rate: need t < horizon");
    const std::size_t i = path.grid.index_of(t);
    const double rate = detail::forward_rate_node(params.forward.density(t), params.F(t),
                                                  path.M[i], path.A[i], params.sigma);
    return RateQuote{t, t, rate};
}

/// Longest forward rate r(t, horizon) = f(horizon) M_t: a geometric Brownian
/// motion, the only lognormal rate in the model
inline RateQuote longest_forward_rate(const ModelParams& params, const PathState& path,
                                      double t) {
    const std::size_t i = path.grid.index_of(t);
    return RateQuote{t, params.horizon(), params.forward.density(params.horizon()) * path.M[i]};
}

/// Exact integral of r(t,u) du over [T1, T2], by the closed-form
/// antiderivative 4M / (sigma^2 A (2 + sigma^2 F(u) A)) written as a
/// difference so the 1/A factor cancels and A = 0 is regular:
///
///   4 M (F(T1) - F(T2)) / ((2 + sigma^2 A F(T1)) (2 + sigma^2 A F(T2)))
///
/// With T2 = horizon this collapses to Y_t(F(T1)), which is -log of the
/// relative bond price: rates integrate back to prices exactly.
inline double rate_integral(const ModelParams& params, const PathState& path, double t,
                            double T1, double T2) {
    if (!(t <= T1 && T1 <= T2)) throw BadMaturityOrder("rate_integral: need t <= T1 <= T2");
    if (T2 > params.horizon() + 1e-12) {
        throw MaturityBeyondHorizon("rate_integral: T2 exceeds the horizon");
    }
    const std::size_t i = path.grid.index_of(t);
    const double m = path.M[i];
    const double a = path.A[i];
    const double s2a = params.sigma * params.sigma * a;
    const double F1 = params.F(T1);
    const double F2 = params.F(T2);
    return 4.0 * m * (F1 - F2) / ((2.0 + s2a * F1) * (2.0 + s2a * F2));
}

/// Rebuild the long bond from rates: exp(-integral of r(t,u) over [t,horizon])
/// by adaptive quadrature (split at interpolation knots, where the table
/// density jumps). Cross-check against rate_integral and long_bond_price.
inline double reconstruct_long_bond(const ModelParams& params, const PathState& path, double t,
                                    double tol = 1e-8) {
    if (!params.forward.absolutely_continuous()) {
        throw NotAbsolutelyContinuous("reconstruct_long_bond: no density");
    }
    const std::size_t i = path.grid.index_of(t);
    const double m = path.M[i];
    const double a = path.A[i];
    const double sigma = params.sigma;
    const auto integrand = [&](double u) {
        return detail::forward_rate_node(params.forward.density(u), params.F(u), m, a, sigma);
    };
    std::vector<double> cuts{t};
    for (double k : params.curve.interior_knots()) {
        if (k > t && k < params.horizon()) cuts.push_back(k);
    }
    cuts.push_back(params.horizon());
    double total = 0.0;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        total += adaptive_simpson(integrand, cuts[s], cuts[s + 1], tol);
    }
    return std::exp(-total);
}

/// Discretization residuals of the forward-rate dynamics
/// dr = sigma r dB - sigma^2 r Y_t(F(T)) dt along one path
struct SdeResidual {
    std::vector<double> residuals;  // one per step, t_i < T
    double rms = 0.0;
};

/// Euler residual r_{i+1} - r_i - sigma r_i dB + sigma^2 r_i Y_i(F(T)) dt per
/// step; the drift uses the exact closed form of integral r(t,u) du over
/// [T, horizon], which is Y_t(F(T))
inline SdeResidual forward_sde_residual(const ModelParams& params, const PathState& path,
                                        double T) {
    if (T > params.horizon() + 1e-12) {
        throw MaturityBeyondHorizon("forward_sde_residual: T exceeds the horizon");
    }
    const double F_T = params.F(T);
    const double f_T = params.forward.density(T);
    const double sigma = params.sigma;
    const double dt = path.grid.dt();
    // residuals run along the path until the rate's own fix date (or the end
    // of the path, whichever comes first); T need not be a grid node
    const auto iT = std::min(path.grid.steps(),
                             static_cast<std::size_t>(std::floor((T + 1e-9) / dt)));
    SdeResidual out;
    out.residuals.reserve(iT);
    KahanSum sumsq;
    for (std::size_t i = 0; i < iT; ++i) {
        const double r0 = detail::forward_rate_node(f_T, F_T, path.M[i], path.A[i], sigma);
        const double r1 =
            detail::forward_rate_node(f_T, F_T, path.M[i + 1], path.A[i + 1], sigma);
        const double db = path.B[i + 1] - path.B[i];
        const double y = y_value(F_T, path.M[i], path.A[i], sigma);
        const double res = r1 - r0 - sigma * r0 * db + sigma * sigma * r0 * y * dt;
        out.residuals.push_back(res);
        sumsq.add(res * res);
    }
    out.rms = out.residuals.empty()
                  ? 0.0
                  : std::sqrt(sumsq.value() / static_cast<double>(out.residuals.size()));
    return out;
}

/// Both sides of the near-zero identity
/// r(t) r(t,horizon) / log^2 P(t,horizon) = f(horizon) f(t) / F(t)^2.
/// The left side is all path quantities, the right side is curve-only; their
/// equality is what lets observed rates pin down the curve near maturity.
struct NearZeroIdentity {
    double lhs;
    double rhs;
};

inline NearZeroIdentity near_zero_identity(const ModelParams& params, const PathState& path,
                                           double t) {
    const double F_t = params.F(t);
    if (!(F_t > 0.0)) throw InvalidParameter("near_zero_identity: F(t) must be > 0");
    const double r_spot = spot_rate(params, path, t).rate;
    const double r_long = longest_forward_rate(params, path, t).rate;
    const std::size_t i = path.grid.index_of(t);
    const double log_p = -y_value(F_t, path.M[i], path.A[i], params.sigma);
    const double f_h = params.forward.density(params.horizon());
    const double f_t = params.forward.density(t);
    return NearZeroIdentity{r_spot * r_long / (log_p * log_p), f_h * f_t / (F_t * F_t)};
}

}  // namespace longbond
