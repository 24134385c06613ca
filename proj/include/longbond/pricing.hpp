/**
 * @file pricing.hpp
 * @brief Caplets (Monte Carlo limit probabilities + normal approximation),
 *        forward contracts, and the naive-expectation pitfall demo
 */

#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "longbond/bonds.hpp"
#include "longbond/errors.hpp"
#include "longbond/math.hpp"
#include "longbond/mc.hpp"
#include "longbond/params.hpp"
#include "longbond/path.hpp"
#include "longbond/processes.hpp"

namespace longbond {

/// Caplet on the simple rate over [T, Tprime] with per-year cap
struct CapletSpec {
    double T;        // rate-fix time
    double Tprime;   // payment time
    double cap;      // per-year cap k

    double delta() const { return Tprime - T; }
    double kappa() const { return 1.0 + delta() * cap; }
};

/// K and K' estimated on shared paths (common random numbers)
struct KPair {
    MCEstimate k;
    MCEstimate k_prime;
};

namespace detail {

// special-model grid for the (M,A) pair at elapsed time s:
// dt = 2^-10 min(1,s), i.e. 1024 steps per unit of max(1,s)
inline TimeGrid k_grid(double s) {
    const auto steps = static_cast<std::size_t>(std::llround(std::ceil(1024.0 * std::max(1.0, s))));
    return TimeGrid(s, steps);
}

}  // namespace detail

/// Estimate K(s,x,y) = Pr{ 2M_s/(2x^{-1} - A_s) >= y or A_s >= 2x^{-1} } and
/// K'(s,x,y) = Pr{ 2M_s/(2x^{-1} + A_s) >= y } from one ensemble of
/// special-model (sigma = 1) paths.
///
/// A path that explodes (A_s past 2/x) is inside the K event by definition:
/// the explosion mass belongs to the probability, it is not an error. The
/// indicator for K dominates the one for K' on every single path, so the
/// estimated K >= K' holds deterministically, not just in expectation.
///
/// Degenerate shortcuts, exact with zero stderr: s = 0 compares x against y
/// directly; y <= 0 is a sure event for both.
inline KPair k_pair_fn(double s, double x, double y, const MCConfig& mc) {
    if (!(x > 0.0)) throw NonPositiveX("k functions need x > 0");
    if (s < 0.0) throw InvalidParameter("k functions need s >= 0");
    if (s == 0.0) {
        const double ind = x >= y ? 1.0 : 0.0;
        return {MCEstimate{ind, 0.0, mc.paths, mc.seed}, MCEstimate{ind, 0.0, mc.paths, mc.seed}};
    }
    if (y <= 0.0) {
        return {MCEstimate{1.0, 0.0, mc.paths, mc.seed}, MCEstimate{1.0, 0.0, mc.paths, mc.seed}};
    }
    const TimeGrid grid = detail::k_grid(s);
    const double thr = 2.0 / x;
    auto estimates = ensemble_mean_vec(mc, 2, [&](PathRng& rng, std::uint64_t, double* out) {
        double m_end = 1.0, a_end = 0.0;
        walk_path(1.0, grid, rng, [&](std::size_t, double, double, double m, double a) {
            m_end = m;
            a_end = a;
            return true;
        });
        const bool exploded = a_end >= thr;
        out[0] = (exploded || 2.0 * m_end / (thr - a_end) >= y) ? 1.0 : 0.0;
        out[1] = (2.0 * m_end / (thr + a_end) >= y) ? 1.0 : 0.0;
    });
    return {estimates[0], estimates[1]};
}

/// K(s,x,y); shares paths with k_prime_fn at the same seed
inline MCEstimate k_fn(double s, double x, double y, const MCConfig& mc) {
    return k_pair_fn(s, x, y, mc).k;
}

/// K'(s,x,y); shares paths with k_fn at the same seed
inline MCEstimate k_prime_fn(double s, double x, double y, const MCConfig& mc) {
    return k_pair_fn(s, x, y, mc).k_prime;
}

namespace detail {

struct CapletInputs {
    double p_T;      // P(t,T) at the node
    double p_Tp;     // P(t,Tprime)
    double x;        // log(P(t,T)/P(t,Tprime)) > 0
    double tau;      // T - t
};

inline CapletInputs caplet_inputs(const ModelParams& params, const PathState& path, double t,
                                  const CapletSpec& spec) {
    if (!(spec.T > 0.0 && spec.T < spec.Tprime)) {
        throw BadMaturityOrder("caplet: need 0 < T < Tprime");
    }
    if (spec.Tprime > params.horizon() + 1e-12) {
        throw MaturityBeyondHorizon("caplet: Tprime exceeds the horizon");
    }
    if (t > spec.T) throw BadMaturityOrder("caplet: need t <= T");
    const std::size_t i = path.grid.index_of(t);
    const double m = path.M[i];
    const double a = path.A[i];
    const double y_T = y_value(params.F(spec.T), m, a, params.sigma);
    const double y_Tp = y_value(params.F(spec.Tprime), m, a, params.sigma);
    const double y_t = y_value(params.F(t), m, a, params.sigma);
    const double x = y_T - y_Tp;  // log price ratio without the cancellation-prone logs
    if (!(x > 0.0)) throw NonPositiveX("caplet: P(t,T) must exceed P(t,Tprime)");
    return CapletInputs{std::exp(y_T - y_t), std::exp(y_Tp - y_t), x, spec.T - t};
}

}  // namespace detail

/// Monte Carlo caplet price at a path node:
///   delta^{-1} [ P(t,T) K(sigma^2 tau, x, log kappa)
///                - kappa P(t,Tprime) K'(sigma^2 tau, x, log kappa) ]
/// K and K' share paths; the reported stderr combines the two in quadrature
/// (conservative, it ignores their positive correlation).
inline MCEstimate caplet_price(const ModelParams& params, const PathState& path, double t,
                               const CapletSpec& spec, const MCConfig& mc) {
    const auto in = detail::caplet_inputs(params, path, t, spec);
    const double kappa = spec.kappa();
    const KPair kp = k_pair_fn(params.sigma * params.sigma * in.tau, in.x, std::log(kappa), mc);
    const double delta = spec.delta();
    const double mean = (in.p_T * kp.k.mean - kappa * in.p_Tp * kp.k_prime.mean) / delta;
    const double se = std::sqrt(in.p_T * in.p_T * kp.k.std_err * kp.k.std_err +
                                kappa * kappa * in.p_Tp * in.p_Tp * kp.k_prime.std_err *
                                    kp.k_prime.std_err) /
                      delta;
    return MCEstimate{mean, se, kp.k.n, mc.seed};
}

/// Closed-form approximation
///   delta^{-1} [ P(t,T) Phi(b1) - kappa P(t,Tprime) Phi(b2) ],
///   b_{1,2} = (x - log kappa) / (sigma sqrt(tau) x) +- (sigma/2) sqrt(tau) x.
/// Accurate when sigma sqrt(tau) x is small; below 1e-14 the window is
/// degenerate and the intrinsic discounted payoff is returned instead.
inline double caplet_price_approx(const ModelParams& params, const PathState& path, double t,
                                  const CapletSpec& spec) {
    const auto in = detail::caplet_inputs(params, path, t, spec);
    const double kappa = spec.kappa();
    const double w = params.sigma * std::sqrt(in.tau) * in.x;
    const double delta = spec.delta();
    if (w < 1e-14) {
        return std::max(in.p_T - kappa * in.p_Tp, 0.0) / delta;
    }
    const double b1 = (in.x - std::log(kappa)) / w + 0.5 * w;
    const double b2 = b1 - w;
    return (in.p_T * normal_cdf(b1) - kappa * in.p_Tp * normal_cdf(b2)) / delta;
}

/// Forward contract paying the long bond against strike kappa at T:
/// value P(t,horizon) - kappa P(t,T)
inline double forward_contract_long(const ModelParams& params, const PathState& path, double t,
                                    double T, double kappa) {
    if (!(T < params.horizon())) {
        throw BadMaturityOrder("forward_contract_long: need T < horizon");
    }
    return bond_price(params, path, t, params.horizon()) - kappa * bond_price(params, path, t, T);
}

/// Forward contract on the Tprime-bond with its static replication
struct ForwardQuote {
    double price;
    std::array<double, 3> replication;  // units of (T-bond, Tprime-bond, long bond)
};

/// Value P(t,Tprime) - kappa P(t,T); replicated by shorting kappa T-bonds
/// and holding one Tprime-bond
inline ForwardQuote forward_contract(const ModelParams& params, const PathState& path, double t,
                                     double T, double Tprime, double kappa) {
    if (!(T < Tprime)) throw BadMaturityOrder("forward_contract: need T < Tprime");
    const double price =
        bond_price(params, path, t, Tprime) - kappa * bond_price(params, path, t, T);
    return ForwardQuote{price, {-kappa, 1.0, 0.0}};
}

/// What the naive-expectation experiment reports
struct PitfallReport {
    MCEstimate naive;  // MC mean of exp(Y_T), the wrong "price"
    double correct;    // exp(F(T)), the actual initial discounted price
    double gap;        // correct - naive
    double z;          // gap / stderr
};

/// The discounted T-bond is a strict local martingale: averaging its time-T
/// value undershoots its time-0 price. Reports the gap and a one-sided z
/// score; the claim "gap > 0" is significant when z > 3.
inline PitfallReport pitfall_gap(const ModelParams& params, double T, const MCConfig& mc,
                                 double dt = 0x1.0p-8) {
    if (!params.curve.strictly_decreasing()) {
        throw NonStrictCurve("pitfall_gap: needs a strictly decreasing curve");
    }
    if (!(T > 0.0 && T < params.horizon())) {
        throw InvalidParameter("pitfall_gap: need 0 < T < horizon");
    }
    const double x0 = params.F(T);
    const TimeGrid grid = TimeGrid::with_step(T, dt);
    const double sigma = params.sigma;
    const MCEstimate naive = ensemble_mean(mc, [&](PathRng& rng, std::uint64_t) {
        double m_end = 1.0, a_end = 0.0;
        walk_path(sigma, grid, rng, [&](std::size_t, double, double, double m, double a) {
            m_end = m;
            a_end = a;
            return true;
        });
        return std::exp(y_value(x0, m_end, a_end, sigma));
    });
    const double correct = std::exp(x0);
    const double gap = correct - naive.mean;
    return PitfallReport{naive, correct, gap, gap / naive.std_err};
}

/// Control experiment: stop the discounted bond at the first grid node where
/// Y reaches `level` (keeping that node's actual value) and average. The
/// stopped process is a true martingale, so the mean recovers exp(F(T)).
inline MCEstimate stopped_discounted_mean(const ModelParams& params, double T, double level,
                                          const MCConfig& mc, double dt = 0x1.0p-10) {
    if (!(T > 0.0 && T <= params.horizon())) {
        throw InvalidParameter("stopped_discounted_mean: need 0 < T <= horizon");
    }
    if (!(level > 0.0)) throw InvalidParameter("stopped_discounted_mean: level must be > 0");
    const double x0 = params.F(T);
    if (!(x0 > 0.0)) throw NonStrictCurve("stopped_discounted_mean: F(T) must be > 0");
    const TimeGrid grid = TimeGrid::with_step(T, dt);
    const double sigma = params.sigma;
    return ensemble_mean(mc, [&](PathRng& rng, std::uint64_t) {
        double y_stop = x0;
        walk_path(sigma, grid, rng, [&](std::size_t, double, double, double m, double a) {
            y_stop = y_value(x0, m, a, sigma);
            return y_stop < level;  // stop at the crossing node, value kept
        });
        return std::exp(y_stop);
    });
}

}  // namespace longbond
