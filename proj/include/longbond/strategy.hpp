/**
 * @file strategy.hpp
 * @brief Trading strategies over finitely many maturities: gains processes,
 *        the self-financing residual, tameness, and the supermartingale test
 *
 * Positions are piecewise constant and grid-aligned: a position vector is in
 * force over a grid interval and changes only through scheduled trades, so
 * every Stieltjes sum below uses the left-endpoint (predictable) convention.
 * Stopping rules see only the path prefix, which enforces adaptedness.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "longbond/bonds.hpp"
#include "longbond/errors.hpp"
#include "longbond/mc.hpp"
#include "longbond/params.hpp"
#include "longbond/path.hpp"
#include "longbond/processes.hpp"

namespace longbond {

/// Deterministic stop at a grid time
struct FixedTimeStop {
    double t;
};

/// Stop at the first node where Y_t(F(ref_maturity)) >= level: the log
/// discounted price of the ref_maturity bond crosses the level. This is the
/// cap that turns short positions tame.
struct LevelCrossingStop {
    double ref_maturity;
    double level;
};

using StopRule = std::variant<FixedTimeStop, LevelCrossingStop>;

/// Grid index where a rule fires on this path
inline StopHit resolve_stop(const StopRule& rule, const ModelParams& params,
                            const PathState& path) {
    if (const auto* fixed = std::get_if<FixedTimeStop>(&rule)) {
        return StopHit{path.grid.index_of(fixed->t), true};
    }
    const auto& lvl = std::get<LevelCrossingStop>(rule);
    return stopping_time_level(path, params, params.F(lvl.ref_maturity), lvl.level);
}

/// Move the whole position of one leg into another at the node's prices.
/// Value-preserving by construction: the portfolio is worth the same the
/// instant before and after.
struct RollTrade {
    StopRule when;
    std::size_t from_leg;
    std::size_t to_leg;
};

/// Overwrite one leg's position with an arbitrary unit count. Not
/// value-preserving in general: this is the cash-injection negative control
/// for the self-financing detector.
struct SetTrade {
    StopRule when;
    std::size_t leg;
    double units;
};

using Trade = std::variant<RollTrade, SetTrade>;

/// A trading strategy over an ordered list of bond maturities.
/// The last leg may be the horizon bond itself.
struct Strategy {
    std::vector<double> maturities;         // ascending, each <= horizon
    std::vector<double> initial_positions;  // units per leg, in force from t=0
    std::vector<Trade> trades;
    StopRule close_out = FixedTimeStop{0.0};       // T_theta: after it, no positions
    std::optional<LevelCrossingStop> level_cap;    // optional tameness cap, may fire earlier
    double declared_tame_bound = -1e9;  // claimed lower bound on discounted gains
    double position_bound = 1e3;        // claimed sup of |units| over legs and time
};

inline void validate_strategy(const Strategy& s, const ModelParams& params) {
    if (s.maturities.empty()) throw InvalidParameter("strategy: no maturities");
    if (s.maturities.size() != s.initial_positions.size()) {
        throw InvalidParameter("strategy: positions/maturities size mismatch");
    }
    for (std::size_t i = 0; i < s.maturities.size(); ++i) {
        if (s.maturities[i] > params.horizon() + 1e-12) {
            throw MaturityNotInModel("strategy maturity beyond the horizon");
        }
        if (i > 0 && !(s.maturities[i] > s.maturities[i - 1])) {
            throw InvalidParameter("strategy maturities must be strictly increasing");
        }
    }
    if (!(s.position_bound > 0.0)) throw InvalidParameter("strategy: position bound must be > 0");
}

/// Everything one path evaluation produces; all series share the path grid.
///
/// After the close-out node the position is zero (gains and residual freeze)
/// and the report keeps the discounted value constant by reinvesting the
/// close-out proceeds in the long bond, so discounted_value is exactly the
/// stopped series the supermartingale statements are about.
struct PortfolioReport {
    std::vector<double> gains;             // G(t_j), Stieltjes sums against bond prices
    std::vector<double> discounted_gains;  // sums against discounted prices
    std::vector<double> portfolio_value;   // Pi(t_j); long-bond extension after close-out
    std::vector<double> discounted_value;  // Pi/P(.,horizon), constant after close-out
    std::vector<double> residual;          // discounted_value - initial - discounted_gains
    double self_financing_residual = 0.0;  // max |residual| up to close-out
    double tame_bound = 0.0;               // inf_t discounted_gains
    std::size_t close_index = 0;
    bool cap_triggered = false;
};

/// Run one strategy along one path
inline PortfolioReport evaluate_strategy(const Strategy& strat, const ModelParams& params,
                                         const PathState& path) {
    validate_strategy(strat, params);
    const std::size_t n_legs = strat.maturities.size();
    const std::size_t n_nodes = path.M.size();
    const double sigma = params.sigma;

    // close-out node: scheduled rule, capped by the tameness level if it fires earlier
    StopHit close = resolve_stop(strat.close_out, params, path);
    bool capped = false;
    if (strat.level_cap) {
        const StopHit cap = resolve_stop(StopRule{*strat.level_cap}, params, path);
        if (cap.triggered && cap.index < close.index) {
            close = cap;
            capped = true;
        }
    }
    const std::size_t c = close.index;

    // trades resolved up-front; rules only read the path, never the positions
    struct PendingTrade {
        std::size_t node;
        std::size_t ordinal;  // list order breaks ties at one node
        const Trade* trade;
    };
    std::vector<PendingTrade> pending;
    pending.reserve(strat.trades.size());
    for (std::size_t k = 0; k < strat.trades.size(); ++k) {
        const StopRule& when = std::visit([](const auto& tr) -> const StopRule& { return tr.when; },
                                          strat.trades[k]);
        const StopHit hit = resolve_stop(when, params, path);
        if (hit.triggered && hit.index <= c) pending.push_back({hit.index, k, &strat.trades[k]});
    }
    std::stable_sort(pending.begin(), pending.end(),
                     [](const PendingTrade& a, const PendingTrade& b) {
                         return a.node != b.node ? a.node < b.node : a.ordinal < b.ordinal;
                     });

    // leg maturity indices; a position must be flat by its own maturity
    std::vector<std::size_t> leg_idx(n_legs);
    std::vector<double> leg_F(n_legs);
    for (std::size_t l = 0; l < n_legs; ++l) {
        leg_idx[l] = path.grid.index_of(strat.maturities[l]);
        leg_F[l] = params.F(strat.maturities[l]);
    }

    PortfolioReport rep;
    rep.close_index = c;
    rep.cap_triggered = capped;
    rep.gains.resize(n_nodes);
    rep.discounted_gains.resize(n_nodes);
    rep.portfolio_value.resize(n_nodes);
    rep.discounted_value.resize(n_nodes);
    rep.residual.resize(n_nodes);

    std::vector<double> pos = strat.initial_positions;
    std::vector<double> disc(n_legs);   // exp(Y(F(T_l))) at the current node
    std::vector<double> price(n_legs);  // bond prices at the current node

    auto node_values = [&](std::size_t j, double& numeraire) {
        const double m = path.M[j];
        const double a = path.A[j];
        const double y_t = y_value(params.F(path.grid.time(j)), m, a, sigma);
        numeraire = std::exp(-y_t);
        for (std::size_t l = 0; l < n_legs; ++l) {
            const double y_l = y_value(leg_F[l], m, a, sigma);
            disc[l] = std::exp(y_l);
            price[l] = std::exp(y_l - y_t);
        }
    };

    auto check_bounds = [&](std::size_t j) {
        for (std::size_t l = 0; l < n_legs; ++l) {
            if (std::fabs(pos[l]) > strat.position_bound) {
                throw InvalidParameter("strategy breached its declared position bound");
            }
            if (j > leg_idx[l] && pos[l] != 0.0) {
                throw InvalidParameter("strategy holds a bond past its maturity");
            }
        }
    };

    double numeraire = 1.0;
    node_values(0, numeraire);
    auto pend_it = pending.begin();
    // trades scheduled at node 0 apply before the initial endowment is read
    while (pend_it != pending.end() && pend_it->node == 0) {
        std::visit(
            [&](const auto& tr) {
                using T = std::decay_t<decltype(tr)>;
                if constexpr (std::is_same_v<T, RollTrade>) {
                    pos[tr.to_leg] += pos[tr.from_leg] * price[tr.from_leg] / price[tr.to_leg];
                    pos[tr.from_leg] = 0.0;
                } else {
                    pos[tr.leg] = tr.units;
                }
            },
            *pend_it->trade);
        ++pend_it;
    }
    check_bounds(0);

    KahanSum gains, disc_gains;
    double value = 0.0, disc_value = 0.0;
    for (std::size_t l = 0; l < n_legs; ++l) {
        value += pos[l] * price[l];
        disc_value += pos[l] * disc[l];
    }
    const double disc0 = disc_value;
    rep.portfolio_value[0] = value;
    rep.discounted_value[0] = disc_value;
    rep.tame_bound = 0.0;

    std::vector<double> prev_disc = disc;
    std::vector<double> prev_price = price;

    for (std::size_t j = 1; j <= c; ++j) {
        node_values(j, numeraire);
        // left-endpoint sums over (t_{j-1}, t_j]
        for (std::size_t l = 0; l < n_legs; ++l) {
            if (pos[l] != 0.0) {
                gains.add(pos[l] * (price[l] - prev_price[l]));
                disc_gains.add(pos[l] * (disc[l] - prev_disc[l]));
            }
        }
        // trades fire after the increment settles
        while (pend_it != pending.end() && pend_it->node == j) {
            std::visit(
                [&](const auto& tr) {
                    using T = std::decay_t<decltype(tr)>;
                    if constexpr (std::is_same_v<T, RollTrade>) {
                        pos[tr.to_leg] += pos[tr.from_leg] * price[tr.from_leg] / price[tr.to_leg];
                        pos[tr.from_leg] = 0.0;
                    } else {
                        pos[tr.leg] = tr.units;
                    }
                },
                *pend_it->trade);
            ++pend_it;
        }
        check_bounds(j);
        value = 0.0;
        disc_value = 0.0;
        for (std::size_t l = 0; l < n_legs; ++l) {
            value += pos[l] * price[l];
            disc_value += pos[l] * disc[l];
        }
        rep.gains[j] = gains.value();
        rep.discounted_gains[j] = disc_gains.value();
        rep.portfolio_value[j] = value;
        rep.discounted_value[j] = disc_value;
        rep.residual[j] = disc_value - disc0 - disc_gains.value();
        rep.tame_bound = std::min(rep.tame_bound, disc_gains.value());
        prev_disc = disc;
        prev_price = price;
    }

    // close out: freeze gains and residual, park the proceeds in the long
    // bond so the discounted value stays exactly constant
    const double frozen_disc = rep.discounted_value[c];
    const double frozen_gain = rep.gains[c];
    const double frozen_dgain = rep.discounted_gains[c];
    const double frozen_res = rep.residual[c];
    for (std::size_t j = c + 1; j < n_nodes; ++j) {
        node_values(j, numeraire);
        rep.gains[j] = frozen_gain;
        rep.discounted_gains[j] = frozen_dgain;
        rep.discounted_value[j] = frozen_disc;
        rep.portfolio_value[j] = frozen_disc * numeraire;
        rep.residual[j] = frozen_res;
    }
    double max_res = 0.0;
    for (std::size_t j = 0; j <= c; ++j) {
        max_res = std::max(max_res, std::fabs(rep.residual[j]));
    }
    rep.self_financing_residual = max_res;
    return rep;
}

/// Gains process G(t) as a series on the path grid
inline std::vector<double> gains_process(const Strategy& strat, const ModelParams& params,
                                         const PathState& path) {
    return evaluate_strategy(strat, params, path).gains;
}

/// Self-financing residual series: discounted value minus initial endowment
/// minus the discounted-gains sum; zero (to roundoff) iff every trade
/// preserves value at its node
inline std::vector<double> self_financing_residual(const Strategy& strat,
                                                   const ModelParams& params,
                                                   const PathState& path) {
    return evaluate_strategy(strat, params, path).residual;
}

/// Tameness verdict over an ensemble
struct TamenessReport {
    bool tame = true;
    double worst = 0.0;                        // inf over paths/t of discounted gains
    double declared_bound = 0.0;
    std::optional<std::uint64_t> witness;      // first path violating the bound
};

/// Scan an ensemble for a path whose discounted gains fall below the
/// declared bound. A pass is evidence, not proof: tameness is a statement
/// about all paths and this checks finitely many.
inline TamenessReport tameness_check(const Strategy& strat, const ModelParams& params,
                                     const TimeGrid& grid, const MCConfig& mc) {
    TamenessReport rep;
    rep.declared_bound = strat.declared_tame_bound;
    for (std::uint64_t p = 0; p < mc.paths; ++p) {
        const PathState path = simulate_path(params, grid, mc.seed, p);
        const PortfolioReport r = evaluate_strategy(strat, params, path);
        if (r.tame_bound < rep.worst) rep.worst = r.tame_bound;
        if (r.tame_bound < strat.declared_tame_bound && !rep.witness) {
            rep.witness = p;
            rep.tame = false;
        }
    }
    return rep;
}

/// One s < t comparison of the stopped discounted portfolio means
struct CheckpointPair {
    double s;
    double t;
    double mean_diff;  // mean of u(t) - u(s), paired across paths
    double se_diff;
    bool pass;         // mean_diff <= 3 se_diff
};

struct SupermartingaleReport {
    std::vector<CheckpointPair> pairs;
    double max_residual = 0.0;
    bool pass = true;
};

/// Check the supermartingale property of the stopped discounted portfolio:
/// for every checkpoint pair s < t the sample mean at t must not exceed the
/// mean at s by more than 3 paired stderr. Requires the strategy to be tame
/// (per its declared bound) and self-financing on the same ensemble first;
/// raises PrerequisiteFailed otherwise.
inline SupermartingaleReport supermartingale_test(const Strategy& strat,
                                                  const ModelParams& params, const TimeGrid& grid,
                                                  const MCConfig& mc,
                                                  const std::vector<double>& checkpoints) {
    if (checkpoints.size() < 2) throw InvalidParameter("need at least two checkpoints");
    std::vector<std::size_t> idx;
    idx.reserve(checkpoints.size());
    for (double t : checkpoints) idx.push_back(grid.index_of(t));

    const std::size_t k = idx.size();
    std::vector<KahanSum> diff_sum(k * k), diff_sumsq(k * k);
    double worst_gain = 0.0;
    double max_res = 0.0;
    std::vector<double> u(k);
    for (std::uint64_t p = 0; p < mc.paths; ++p) {
        const PathState path = simulate_path(params, grid, mc.seed, p);
        const PortfolioReport r = evaluate_strategy(strat, params, path);
        max_res = std::max(max_res, r.self_financing_residual);
        worst_gain = std::min(worst_gain, r.tame_bound);
        for (std::size_t i = 0; i < k; ++i) u[i] = r.discounted_value[idx[i]];
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = i + 1; j < k; ++j) {
                const double d = u[j] - u[i];
                diff_sum[i * k + j].add(d);
                diff_sumsq[i * k + j].add(d * d);
            }
        }
    }
    if (worst_gain < strat.declared_tame_bound) {
        throw PrerequisiteFailed("supermartingale_test: strategy is not tame at its bound");
    }
    if (max_res > 1e-9) {
        throw PrerequisiteFailed("supermartingale_test: strategy is not self-financing");
    }

    SupermartingaleReport rep;
    rep.max_residual = max_res;
    const double n = static_cast<double>(mc.paths);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            const double mean = diff_sum[i * k + j].value() / n;
            const double var =
                std::max(0.0, (diff_sumsq[i * k + j].value() - n * mean * mean) / (n - 1.0));
            const double se = std::sqrt(var / n);
            const bool pass = mean <= 3.0 * se;
            rep.pairs.push_back(
                CheckpointPair{checkpoints[i], checkpoints[j], mean, se, pass});
            rep.pass = rep.pass && pass;
        }
    }
    return rep;
}

}  // namespace longbond
