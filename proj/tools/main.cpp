/**
 * @file main.cpp
 * @brief Command-line front end: calibrate, simulate, price, rates, check, demo
 *
 * Output is JSON (schema 1) on stdout unless --out redirects it. Exit codes:
 * 0 success, 2 validation or configuration error, 3 statistical check failed.
 * Every stochastic verb requires --seed and reproduces byte-identical output
 * for the same configuration on the same build.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "longbond/longbond.hpp"

namespace lb = longbond;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCheckFailed = 3;

// ---------------------------------------------------------------------------
// shared model options

struct ModelOptions {
    std::string curve_file;
    std::string scheme = "flat";
    double rate = 0.05;
    double a = 0.5;
    double b = 0.5;
    double horizon = 10.0;
    int depth = 24;
    double sigma = 1.0;
};

void add_model_flags(CLI::App* cmd, ModelOptions& opt) {
    cmd->add_option("--curve", opt.curve_file, "CSV curve file (header: maturity,price)");
    cmd->add_option("--scheme", opt.scheme,
                    "curve scheme: loglinear | flat | powerlaw | cantor (default flat)");
    cmd->add_option("--rate", opt.rate, "flat scheme: continuously compounded rate");
    cmd->add_option("--a", opt.a, "powerlaw scheme: scale a > 0");
    cmd->add_option("--b", opt.b, "powerlaw scheme: exponent b > 0");
    cmd->add_option("--horizon", opt.horizon, "horizon T_h (flat/powerlaw; loglinear uses the CSV)");
    cmd->add_option("--depth", opt.depth, "cantor scheme: construction depth");
    cmd->add_option("--sigma", opt.sigma, "volatility sigma > 0");
}

lb::InitialCurve build_curve(const ModelOptions& opt) {
    if (!opt.curve_file.empty() || opt.scheme == "loglinear") {
        if (opt.curve_file.empty()) {
            throw lb::ConfigError("scheme loglinear requires --curve <file.csv>");
        }
        std::ifstream in(opt.curve_file);
        if (!in) throw lb::IoError("cannot open curve file: " + opt.curve_file);
        const auto points = lb::read_curve_csv(in);
        return lb::InitialCurve::from_table(points, points.back().maturity);
    }
    if (opt.scheme == "flat") return lb::InitialCurve::flat(opt.rate, opt.horizon);
    if (opt.scheme == "powerlaw") return lb::InitialCurve::power_law(opt.a, opt.b, opt.horizon);
    if (opt.scheme == "cantor") return lb::InitialCurve::cantor(opt.depth);
    throw lb::ConfigError("unknown scheme: " + opt.scheme);
}

lb::ModelParams build_model(const ModelOptions& opt) {
    return lb::make_model(opt.sigma, build_curve(opt));
}

// ---------------------------------------------------------------------------
// output plumbing

struct OutputOptions {
    std::string path;  // empty = stdout
};

void emit(const json& doc, const OutputOptions& out) {
    const std::string text = doc.dump(2) + "\n";
    if (out.path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out.path, std::ios::binary);
        if (!f) throw lb::IoError("cannot write output file: " + out.path);
        f << text;
    }
}

double require_step(double step, double fallback) {
    const double s = step > 0.0 ? step : fallback;
    if (!(s > 0.0 && s <= 0.25)) throw lb::ConfigError("--step must lie in (0, 0.25]");
    return s;
}

json estimate_json(const lb::MCEstimate& est) {
    return json{{"mean", est.mean},
                {"stderr", est.std_err},
                {"n", est.n},
                {"seed", est.seed}};
}

// quantiles over a copy; q in [0,1] by nearest-rank on the sorted sample
double quantile(std::vector<double> v, double q) {
    const auto k = static_cast<std::size_t>(q * static_cast<double>(v.size() - 1) + 0.5);
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
    return v[k];
}

// ---------------------------------------------------------------------------
// strategy JSON parsing

lb::StopRule parse_stop(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "time") return lb::FixedTimeStop{j.at("t").get<double>()};
    if (type == "level") {
        return lb::LevelCrossingStop{j.at("ref_maturity").get<double>(),
                                     j.at("level").get<double>()};
    }
    throw lb::ConfigError("stopping rule type must be 'time' or 'level'");
}

lb::Strategy parse_strategy(const json& j) {
    lb::Strategy s;
    s.maturities = j.at("maturities").get<std::vector<double>>();
    s.initial_positions = j.at("initial_positions").get<std::vector<double>>();
    if (j.contains("trades")) {
        for (const auto& t : j.at("trades")) {
            const std::string type = t.at("type").get<std::string>();
            if (type == "roll") {
                s.trades.push_back(lb::RollTrade{parse_stop(t.at("when")),
                                                 t.at("from").get<std::size_t>(),
                                                 t.at("to").get<std::size_t>()});
            } else if (type == "set") {
                s.trades.push_back(lb::SetTrade{parse_stop(t.at("when")),
                                                t.at("leg").get<std::size_t>(),
                                                t.at("units").get<double>()});
            } else {
                throw lb::ConfigError("trade type must be 'roll' or 'set'");
            }
        }
    }
    s.close_out = parse_stop(j.at("close_out"));
    if (j.contains("level_cap")) {
        s.level_cap = lb::LevelCrossingStop{j.at("level_cap").at("ref_maturity").get<double>(),
                                            j.at("level_cap").at("level").get<double>()};
    }
    s.declared_tame_bound = j.at("declared_tame_bound").get<double>();
    if (j.contains("position_bound")) s.position_bound = j.at("position_bound").get<double>();
    return s;
}

lb::InitialCurve parse_curve(const json& j) {
    const std::string scheme = j.at("scheme").get<std::string>();
    if (scheme == "flat") {
        return lb::InitialCurve::flat(j.at("rate").get<double>(), j.at("horizon").get<double>());
    }
    if (scheme == "powerlaw") {
        return lb::InitialCurve::power_law(j.at("a").get<double>(), j.at("b").get<double>(),
                                           j.at("horizon").get<double>());
    }
    if (scheme == "cantor") return lb::InitialCurve::cantor(j.at("depth").get<int>());
    if (scheme == "loglinear") {
        std::vector<lb::CurvePoint> pts;
        for (const auto& p : j.at("points")) {
            pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        }
        return lb::InitialCurve::from_table(pts, pts.back().maturity);
    }
    throw lb::ConfigError("unknown curve scheme in strategy file: " + scheme);
}

// ---------------------------------------------------------------------------
// verbs

int run_calibrate(const ModelOptions& model, const OutputOptions& out) {
    const auto curve = build_curve(model);
    const lb::ForwardCurve fwd{curve};
    json doc{{"schema", 1},
             {"scheme", lb::scheme_name(curve.scheme())},
             {"horizon", curve.horizon()},
             {"F0", fwd.value(0.0)},
             {"p_horizon", curve.discount(curve.horizon())},
             {"strictly_decreasing", curve.strictly_decreasing()},
             {"absolutely_continuous", curve.absolutely_continuous()}};
    if (!curve.interior_knots().empty()) doc["knots"] = curve.interior_knots();
    emit(doc, out);
    return kExitOk;
}

int run_simulate(double sigma, double horizon, double step, std::uint64_t paths,
                 std::uint64_t seed, int threads, const std::string& dump_dir,
                 const OutputOptions& out) {
    if (!(sigma > 0.0)) throw lb::ConfigError("--sigma must be > 0");
    const auto grid = lb::TimeGrid::with_step(horizon, require_step(step, 0x1.0p-10));
    if (!dump_dir.empty()) std::filesystem::create_directories(dump_dir);

    const auto stats = lb::ensemble_mean_vec(
        lb::MCConfig{paths, seed, static_cast<unsigned>(threads)}, 2,
        [&](lb::PathRng& rng, std::uint64_t, double* o) {
            double m_end = 1.0, a_end = 0.0;
            lb::walk_path(sigma, grid, rng, [&](std::size_t, double, double, double m, double a) {
                m_end = m;
                a_end = a;
                return true;
            });
            o[0] = m_end;
            o[1] = a_end;
        });

    if (!dump_dir.empty()) {
        const auto params = lb::make_model(sigma, lb::InitialCurve::flat(0.05, horizon));
        for (std::uint64_t p = 0; p < paths; ++p) {
            const auto path = lb::simulate_path(params, grid, seed, p);
            char name[32];
            std::snprintf(name, sizeof(name), "path_%06llu.csv",
                          static_cast<unsigned long long>(p));
            std::ofstream f(std::filesystem::path(dump_dir) / name, std::ios::binary);
            if (!f) throw lb::IoError("cannot write path dump in " + dump_dir);
            f << "t,B,M,A\n";
            f.precision(17);
            for (std::size_t i = 0; i < path.M.size(); ++i) {
                f << path.grid.time(i) << ',' << path.B[i] << ',' << path.M[i] << ','
                  << path.A[i] << '\n';
            }
        }
    }

    json doc{{"schema", 1},
             {"sigma", sigma},
             {"horizon", horizon},
             {"step", grid.dt()},
             {"paths", paths},
             {"seed", seed},
             {"terminal_M", estimate_json(stats[0])},
             {"terminal_A", estimate_json(stats[1])}};
    if (!dump_dir.empty()) doc["dump"] = dump_dir;
    emit(doc, out);
    return kExitOk;
}

int run_price_bond(const ModelOptions& model, double t, double T, double step,
                   std::uint64_t paths, std::uint64_t seed, const OutputOptions& out) {
    const auto params = build_model(model);
    json doc{{"schema", 1}, {"t", t}, {"T", T}, {"sigma", params.sigma}};
    if (t == 0.0) {
        // deterministic: the calibrated curve itself
        const lb::PathState p0{lb::TimeGrid(params.horizon(), 1),
                               {0.0, 0.0},
                               {1.0, 1.0},
                               {0.0, 0.0}};
        doc["price"] = json{{"mean", lb::bond_price(params, p0, 0.0, T)},
                            {"stderr", 0.0},
                            {"n", 0},
                            {"seed", nullptr}};
        emit(doc, out);
        return kExitOk;
    }
    const auto grid = lb::TimeGrid::with_step(t, require_step(step, 0x1.0p-10));
    std::vector<double> prices;
    prices.reserve(paths);
    lb::KahanSum sum, sumsq;
    for (std::uint64_t p = 0; p < paths; ++p) {
        const auto path = lb::simulate_path(params, grid, seed, p);
        const double v = lb::bond_price(params, path, t, T);
        prices.push_back(v);
        sum.add(v);
        sumsq.add(v * v);
    }
    const double n = static_cast<double>(paths);
    const double mean = sum.value() / n;
    const double var = std::max(0.0, (sumsq.value() - n * mean * mean) / (n - 1.0));
    doc["price"] = json{{"mean", mean}, {"stderr", std::sqrt(var / n)}, {"n", paths},
                        {"seed", seed}};
    doc["quantiles"] = json{{"q05", quantile(prices, 0.05)},
                            {"q25", quantile(prices, 0.25)},
                            {"q50", quantile(prices, 0.50)},
                            {"q75", quantile(prices, 0.75)},
                            {"q95", quantile(prices, 0.95)}};
    emit(doc, out);
    return kExitOk;
}

int run_price_caplet(const ModelOptions& model, double t, const lb::CapletSpec& spec,
                     bool approx, std::uint64_t paths, std::optional<std::uint64_t> seed,
                     int threads, const OutputOptions& out) {
    const auto params = build_model(model);
    // valuation from the initial state: a two-node path at (M,A) = (1,0)
    const double span = t > 0.0 ? t : params.horizon();
    const lb::PathState p0{lb::TimeGrid(span, 1), {0.0, 0.0}, {1.0, 1.0}, {0.0, 0.0}};
    json doc{{"schema", 1},   {"T", spec.T},   {"Tprime", spec.Tprime},
             {"cap", spec.cap}, {"sigma", params.sigma}, {"t", t}};
    if (approx) {
        doc["method"] = "approx";
        doc["price"] = json{{"mean", lb::caplet_price_approx(params, p0, t, spec)},
                            {"stderr", 0.0},
                            {"n", 0},
                            {"seed", nullptr}};
    } else {
        if (!seed) throw lb::ConfigError("price caplet without --approx requires --seed");
        doc["method"] = "mc";
        const auto est = lb::caplet_price(params, p0, t, spec,
                                          lb::MCConfig{paths, *seed,
                                                       static_cast<unsigned>(threads)});
        doc["price"] = estimate_json(est);
    }
    emit(doc, out);
    return kExitOk;
}

int run_price_forward(const ModelOptions& model, double T, std::optional<double> Tprime,
                      double kappa, const OutputOptions& out) {
    const auto params = build_model(model);
    const lb::PathState p0{lb::TimeGrid(params.horizon(), 1), {0.0, 0.0}, {1.0, 1.0}, {0.0, 0.0}};
    json doc{{"schema", 1}, {"T", T}, {"kappa", kappa}, {"sigma", params.sigma}, {"t", 0.0}};
    if (Tprime) {
        const auto q = lb::forward_contract(params, p0, 0.0, T, *Tprime, kappa);
        doc["Tprime"] = *Tprime;
        doc["price"] = q.price;
        doc["replication"] = q.replication;
    } else {
        doc["price"] = lb::forward_contract_long(params, p0, 0.0, T, kappa);
    }
    emit(doc, out);
    return kExitOk;
}

int run_rates(const ModelOptions& model, double t, double T, double step,
              std::optional<std::uint64_t> seed, const OutputOptions& out) {
    const auto params = build_model(model);
    lb::PathState path{lb::TimeGrid(params.horizon(), 1), {0.0, 0.0}, {1.0, 1.0}, {0.0, 0.0}};
    json doc{{"schema", 1}, {"t", t}, {"T", T}, {"sigma", params.sigma}};
    if (t > 0.0) {
        if (!seed) throw lb::ConfigError("rates with --t > 0 requires --seed");
        const auto grid =
            lb::TimeGrid::with_step(params.horizon(), require_step(step, 0x1.0p-10));
        path = lb::simulate_path(params, grid, *seed, 0);
        doc["seed"] = *seed;
    }
    const std::size_t i = path.grid.index_of(t);
    doc["M"] = path.M[i];
    doc["A"] = path.A[i];
    doc["spot"] = lb::spot_rate(params, path, t).rate;
    doc["forward"] = lb::forward_rate(params, path, t, T).rate;
    doc["longest_forward"] = lb::longest_forward_rate(params, path, t).rate;
    emit(doc, out);
    return kExitOk;
}

int run_rates_identities(double step, std::uint64_t seed, const OutputOptions& out) {
    // sweep the rate identities on simulated nodes over two curve schemes;
    // exit 3 if any identity degrades past its tolerance
    const double dt = require_step(step, 0x1.0p-8);
    const std::vector<lb::ModelParams> models = {
        lb::make_model(1.0, lb::InitialCurve::flat(0.05, 10.0)),
        lb::make_model(0.6, lb::InitialCurve::from_table(
                                {{2.0, 0.93}, {6.0, 0.8}, {10.0, 0.62}}, 10.0)),
    };
    double max_near_zero = 0.0;
    double max_integral = 0.0;
    double max_reconstruct = 0.0;
    lb::PathRng pick(seed, 0xABCDEF);
    for (std::size_t mi = 0; mi < models.size(); ++mi) {
        const auto& params = models[mi];
        const auto grid = lb::TimeGrid::with_step(params.horizon(), dt);
        const auto path = lb::simulate_path(params, grid, seed, mi);
        for (int k = 0; k < 20; ++k) {
            const auto node = static_cast<std::size_t>(pick.uniform() *
                                                       static_cast<double>(grid.steps() - 1));
            const double t = grid.time(node);
            const double T1 = t + (params.horizon() - t) * 0.25;
            const double T2 = t + (params.horizon() - t) * 0.75;
            // forward_rate itself cross-checks its two closed forms
            (void)lb::forward_rate(params, path, t, T2);
            const auto id = lb::near_zero_identity(params, path, t);
            max_near_zero = std::max(max_near_zero,
                                     std::fabs(id.lhs - id.rhs) / std::fabs(id.rhs));
            const double quad = lb::adaptive_simpson(
                [&](double u) { return lb::forward_rate(params, path, t, u).rate; }, T1, T2,
                1e-10);
            max_integral =
                std::max(max_integral,
                         std::fabs(lb::rate_integral(params, path, t, T1, T2) - quad));
            max_reconstruct =
                std::max(max_reconstruct, std::fabs(lb::reconstruct_long_bond(params, path, t) -
                                                    lb::long_bond_price(params, path, t)));
        }
    }
    const bool pass = max_near_zero <= 1e-9 && max_integral <= 1e-6 && max_reconstruct <= 1e-6;
    json doc{{"schema", 1},
             {"seed", seed},
             {"max_near_zero_relative_error", max_near_zero},
             {"max_integral_error", max_integral},
             {"max_reconstruction_error", max_reconstruct},
             {"pass", pass}};
    emit(doc, out);
    return pass ? kExitOk : kExitCheckFailed;
}

int run_check_strategy(const std::string& file, std::uint64_t paths, std::uint64_t seed,
                       double step, const OutputOptions& out) {
    std::ifstream in(file);
    if (!in) throw lb::IoError("cannot open strategy file: " + file);
    json spec;
    try {
        in >> spec;
    } catch (const json::exception& e) {
        throw lb::ConfigError(std::string("strategy file is not valid JSON: ") + e.what());
    }
    lb::ModelParams params = [&] {
        try {
            const auto& m = spec.at("model");
            return lb::make_model(m.at("sigma").get<double>(), parse_curve(m.at("curve")));
        } catch (const json::exception& e) {
            throw lb::ConfigError(std::string("strategy file: bad model block: ") + e.what());
        }
    }();
    lb::Strategy strat;
    std::vector<double> checkpoints;
    try {
        strat = parse_strategy(spec.at("strategy"));
        checkpoints = spec.at("checkpoints").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw lb::ConfigError(std::string("strategy file: bad strategy block: ") + e.what());
    }
    const auto grid =
        lb::TimeGrid::with_step(params.horizon(), require_step(step, 0x1.0p-6));
    const lb::MCConfig mc{paths, seed, 1};

    const auto tame = lb::tameness_check(strat, params, grid, mc);
    json doc{{"schema", 1},
             {"file", file},
             {"paths", paths},
             {"seed", seed},
             {"tame", tame.tame},
             {"declared_tame_bound", tame.declared_bound},
             {"worst_discounted_gain", tame.worst}};
    if (tame.witness) doc["witness_path"] = *tame.witness;

    bool pass = tame.tame;
    bool self_financing = true;
    if (tame.tame) {
        try {
            const auto report = lb::supermartingale_test(strat, params, grid, mc, checkpoints);
            json pairs = json::array();
            for (const auto& pr : report.pairs) {
                pairs.push_back(json{{"s", pr.s},
                                     {"t", pr.t},
                                     {"mean_diff", pr.mean_diff},
                                     {"stderr_diff", pr.se_diff},
                                     {"pass", pr.pass}});
            }
            doc["supermartingale"] = json{{"pass", report.pass},
                                          {"max_residual", report.max_residual},
                                          {"pairs", pairs}};
            pass = pass && report.pass;
        } catch (const lb::PrerequisiteFailed& e) {
            self_financing = false;
            doc["supermartingale"] = json{{"pass", false}, {"error", e.what()}};
            pass = false;
        }
    }
    doc["self_financing"] = self_financing;
    doc["pass"] = pass;
    emit(doc, out);
    return pass ? kExitOk : kExitCheckFailed;
}

int run_demo_pitfall(const ModelOptions& model, double T, double level, double step,
                     std::uint64_t paths, std::uint64_t seed, int threads,
                     const OutputOptions& out) {
    const auto params = build_model(model);
    const lb::MCConfig mc{paths, seed, static_cast<unsigned>(threads)};
    const auto report = lb::pitfall_gap(params, T, mc, require_step(step, 0x1.0p-8));
    const auto stopped =
        lb::stopped_discounted_mean(params, T, level, mc, require_step(step, 0x1.0p-10));
    json doc{{"schema", 1},
             {"T", T},
             {"sigma", params.sigma},
             {"naive", estimate_json(report.naive)},
             {"correct", report.correct},
             {"gap", report.gap},
             {"z", report.z},
             {"stopped", json{{"level", level},
                              {"mean", stopped.mean},
                              {"stderr", stopped.std_err},
                              {"n", stopped.n},
                              {"seed", stopped.seed}}}};
    emit(doc, out);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"One-factor long-bond term structure toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    OutputOptions out;
    double step = 0.0;  // 0 = verb default (2^-10, or 2^-8 for demo pitfall)
    int threads = 1;
    app.add_option("--out", out.path, "write JSON here instead of stdout")->capture_default_str();
    app.add_option("--step", step, "grid step dt in (0, 0.25]; default 2^-10 (2^-8 for demos)")
        ->check(CLI::PositiveNumber);
    app.add_option("--threads", threads, "worker thread cap for Monte Carlo")
        ->check(CLI::Range(1, 256));

    // calibrate ------------------------------------------------------------
    auto* cal = app.add_subcommand("calibrate", "build a curve and summarize it");
    cal->fallthrough();
    ModelOptions cal_model;
    add_model_flags(cal, cal_model);

    // simulate ---------------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "simulate (B, M, A) paths");
    sim->fallthrough();
    double sim_sigma = 1.0, sim_horizon = 1.0;
    std::uint64_t sim_paths = 1000, sim_seed = 0;
    std::string dump_dir;
    sim->add_option("--sigma", sim_sigma, "volatility");
    sim->add_option("--horizon", sim_horizon, "path horizon");
    sim->add_option("--paths", sim_paths, "number of paths")->required();
    sim->add_option("--seed", sim_seed, "RNG seed")->required();
    sim->add_option("--dump", dump_dir, "directory for per-path CSV dumps (t,B,M,A)");

    // price ------------------------------------------------------------------
    auto* price = app.add_subcommand("price", "price instruments");
    price->fallthrough();
    price->require_subcommand(1);

    auto* pbond = price->add_subcommand("bond", "T-maturity bond price at time t");
    pbond->fallthrough();
    ModelOptions pbond_model;
    add_model_flags(pbond, pbond_model);
    double pb_t = 0.0, pb_T = 0.0;
    std::uint64_t pb_paths = 100000, pb_seed = 0;
    bool pb_seed_set = false;
    pbond->add_option("--t", pb_t, "valuation time")->required();
    pbond->add_option("--T", pb_T, "bond maturity")->required();
    pbond->add_option("--paths", pb_paths, "ensemble size");
    pbond->add_option("--seed", pb_seed, "RNG seed")->each([&](const std::string&) {
        pb_seed_set = true;
    });

    auto* pcap = price->add_subcommand("caplet", "caplet on the nominal forward rate");
    pcap->fallthrough();
    ModelOptions pcap_model;
    add_model_flags(pcap, pcap_model);
    lb::CapletSpec cap_spec{1.0, 1.25, 0.05};
    double pc_t = 0.0;
    std::uint64_t pc_paths = 100000, pc_seed = 0;
    bool pc_seed_set = false, pc_approx = false;
    pcap->add_option("--T", cap_spec.T, "rate-fix time")->required();
    pcap->add_option("--Tprime", cap_spec.Tprime, "payment time")->required();
    pcap->add_option("--cap", cap_spec.cap, "cap level k")->required();
    pcap->add_option("--t", pc_t, "valuation time (from the initial state)");
    pcap->add_option("--paths", pc_paths, "ensemble size");
    pcap->add_option("--seed", pc_seed, "RNG seed")->each([&](const std::string&) {
        pc_seed_set = true;
    });
    pcap->add_flag("--approx", pc_approx, "use the deterministic lognormal-style approximation");

    auto* pfwd = price->add_subcommand("forward", "forward contract at t = 0");
    pfwd->fallthrough();
    ModelOptions pfwd_model;
    add_model_flags(pfwd, pfwd_model);
    double pf_T = 0.0, pf_Tprime = 0.0, pf_kappa = 1.0;
    bool pf_tp_set = false;
    pfwd->add_option("--T", pf_T, "delivery time")->required();
    pfwd->add_option("--Tprime", pf_Tprime, "delivered bond maturity (default: the long bond)")
        ->each([&](const std::string&) { pf_tp_set = true; });
    pfwd->add_option("--kappa", pf_kappa, "strike")->required();

    // rates --------------------------------------------------------------------
    auto* rates = app.add_subcommand("rates", "spot and forward rates along a path");
    rates->fallthrough();
    ModelOptions rates_model;
    add_model_flags(rates, rates_model);
    double rt_t = 0.0, rt_T = 0.0;
    std::uint64_t rt_seed = 0;
    bool rt_seed_set = false, rt_check = false;
    rates->add_option("--t", rt_t, "observation time");
    rates->add_option("--T", rt_T, "forward maturity");
    rates->add_option("--seed", rt_seed, "RNG seed")->each([&](const std::string&) {
        rt_seed_set = true;
    });
    rates->add_flag("--check-identities", rt_check,
                    "sweep the rate identities and report max errors (exit 3 on failure)");

    // check ----------------------------------------------------------------------
    auto* check = app.add_subcommand("check", "statistical checks (CI mode)");
    check->fallthrough();
    check->require_subcommand(1);
    auto* cstrat = check->add_subcommand("strategy", "tameness / self-financing / supermartingale");
    cstrat->fallthrough();
    std::string strat_file;
    std::uint64_t cs_paths = 10000, cs_seed = 0;
    cstrat->add_option("--file", strat_file, "strategy JSON file")->required();
    cstrat->add_option("--paths", cs_paths, "ensemble size");
    cstrat->add_option("--seed", cs_seed, "RNG seed")->required();

    // demo -------------------------------------------------------------------------
    auto* demo = app.add_subcommand("demo", "illustrative experiments");
    demo->fallthrough();
    demo->require_subcommand(1);
    auto* dpit = demo->add_subcommand("pitfall", "naive discounted-bond pricing vs the truth");
    dpit->fallthrough();
    ModelOptions dpit_model;
    add_model_flags(dpit, dpit_model);
    double dp_T = 5.0, dp_level = 6.0;
    std::uint64_t dp_paths = 100000, dp_seed = 0;
    dpit->add_option("--T", dp_T, "bond maturity")->required();
    dpit->add_option("--paths", dp_paths, "ensemble size");
    dpit->add_option("--seed", dp_seed, "RNG seed")->required();
    dpit->add_option("--level", dp_level, "stopping level for the control experiment");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (cal->parsed()) return run_calibrate(cal_model, out);
        if (sim->parsed()) {
            return run_simulate(sim_sigma, sim_horizon, step, sim_paths, sim_seed, threads,
                                dump_dir, out);
        }
        if (pbond->parsed()) {
            if (pb_t > 0.0 && !pb_seed_set) {
                throw lb::ConfigError("price bond with --t > 0 requires --seed");
            }
            return run_price_bond(pbond_model, pb_t, pb_T, step, pb_paths, pb_seed, out);
        }
        if (pcap->parsed()) {
            return run_price_caplet(pcap_model, pc_t, cap_spec, pc_approx, pc_paths,
                                    pc_seed_set ? std::optional<std::uint64_t>(pc_seed)
                                                : std::nullopt,
                                    threads, out);
        }
        if (pfwd->parsed()) {
            return run_price_forward(pfwd_model, pf_T,
                                     pf_tp_set ? std::optional<double>(pf_Tprime) : std::nullopt,
                                     pf_kappa, out);
        }
        if (rates->parsed()) {
            if (rt_check) {
                if (!rt_seed_set) throw lb::ConfigError("rates --check-identities requires --seed");
                return run_rates_identities(step, rt_seed, out);
            }
            return run_rates(rates_model, rt_t, rt_T, step,
                             rt_seed_set ? std::optional<std::uint64_t>(rt_seed) : std::nullopt,
                             out);
        }
        if (cstrat->parsed()) {
            return run_check_strategy(strat_file, cs_paths, cs_seed, step, out);
        }
        if (dpit->parsed()) {
            return run_demo_pitfall(dpit_model, dp_T, dp_level, step, dp_paths, dp_seed, threads,
                                    out);
        }
        throw lb::ConfigError("no verb selected");
    } catch (const lb::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}
