// End-to-end tests of the command-line tool: spawns the built binary,
// parses its JSON, and checks exit codes and reproducibility.

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "longbond/curve.hpp"
#include "longbond/grid.hpp"
#include "longbond/pricing.hpp"

namespace lb = longbond;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    std::string out;
    int code = -1;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(LONGBOND_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    EXPECT_NE(pipe, nullptr);
    RunResult r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path data_file(const std::string& name) { return fs::path(LONGBOND_DATA_DIR) / name; }

fs::path temp_dir() {
    const auto dir = fs::temp_directory_path() / "longbond_cli_test";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST(Cli, HelpExitsCleanly) {
    EXPECT_EQ(run_cli("--help").code, 0);
    EXPECT_EQ(run_cli("price --help").code, 0);
}

TEST(Cli, CalibrateFromCsv) {
    const auto r = run_cli("calibrate --curve " + data_file("curve.csv").string() +
                           " --scheme loglinear");
    ASSERT_EQ(r.code, 0);
    const json doc = json::parse(r.out);
    EXPECT_EQ(doc.at("schema"), 1);
    EXPECT_EQ(doc.at("scheme"), "loglinear");
    EXPECT_DOUBLE_EQ(doc.at("horizon").get<double>(), 10.0);
    EXPECT_NEAR(doc.at("F0").get<double>(), -std::log(0.62), 1e-12);
    EXPECT_NEAR(doc.at("p_horizon").get<double>(), 0.62, 1e-12);
    EXPECT_TRUE(doc.at("strictly_decreasing").get<bool>());
}

TEST(Cli, CalibrateRejectsMissingFile) {
    EXPECT_EQ(run_cli("calibrate --scheme loglinear --curve /nonexistent.csv").code, 2);
    EXPECT_EQ(run_cli("calibrate --scheme loglinear").code, 2);
    EXPECT_EQ(run_cli("calibrate --scheme bogus").code, 2);
}

TEST(Cli, SimulateRequiresSeedAndValidStep) {
    EXPECT_EQ(run_cli("simulate --paths 4").code, 2);              // no seed
    EXPECT_EQ(run_cli("simulate --paths 4 --seed 1 --step 0.3").code, 2);
    EXPECT_EQ(run_cli("simulate --paths 4 --seed 1 --step 0").code, 2);
}

TEST(Cli, SimulateDumpsPathFiles) {
    const auto dir = temp_dir() / "dumps";
    fs::remove_all(dir);
    const auto r = run_cli("simulate --paths 2 --seed 11 --horizon 1 --step 0.0625 --dump " +
                           dir.string());
    ASSERT_EQ(r.code, 0);
    const json doc = json::parse(r.out);
    EXPECT_EQ(doc.at("paths"), 2);
    std::ifstream f(dir / "path_000001.csv");
    ASSERT_TRUE(f.good());
    std::string header, first;
    std::getline(f, header);
    std::getline(f, first);
    EXPECT_EQ(header, "t,B,M,A");
    EXPECT_EQ(first, "0,0,1,0");
}

TEST(Cli, StochasticOutputIsByteIdentical) {
    const std::string cmd =
        "price caplet --T 1 --Tprime 1.25 --cap 0.05 --sigma 0.2 --paths 2000 --seed 42";
    const auto a = run_cli(cmd);
    const auto b = run_cli(cmd);
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    const auto c = run_cli(
        "price caplet --T 1 --Tprime 1.25 --cap 0.05 --sigma 0.2 --paths 2000 --seed 43");
    EXPECT_NE(a.out, c.out);
}

TEST(Cli, CapletApproxMatchesTheLibrary) {
    const auto r =
        run_cli("price caplet --T 1 --Tprime 1.25 --cap 0.05 --sigma 0.2 --approx");
    ASSERT_EQ(r.code, 0);
    const json doc = json::parse(r.out);
    EXPECT_EQ(doc.at("method"), "approx");
    const auto params = lb::make_model(0.2, lb::InitialCurve::flat(0.05, 10.0));
    const lb::PathState p0{lb::TimeGrid(10.0, 1), {0.0, 0.0}, {1.0, 1.0}, {0.0, 0.0}};
    const double want = lb::caplet_price_approx(params, p0, 0.0, lb::CapletSpec{1.0, 1.25, 0.05});
    EXPECT_DOUBLE_EQ(doc.at("price").at("mean").get<double>(), want);
    EXPECT_DOUBLE_EQ(doc.at("price").at("stderr").get<double>(), 0.0);
}

TEST(Cli, CapletMonteCarloRequiresSeed) {
    EXPECT_EQ(run_cli("price caplet --T 1 --Tprime 1.25 --cap 0.05 --paths 100").code, 2);
}

TEST(Cli, StochasticEstimatesCarryTheirProvenance) {
    const auto r = run_cli(
        "price caplet --T 1 --Tprime 1.25 --cap 0.05 --sigma 0.2 --paths 2000 --seed 42");
    ASSERT_EQ(r.code, 0);
    const json doc = json::parse(r.out);
    EXPECT_EQ(doc.at("price").at("n"), 2000);
    EXPECT_EQ(doc.at("price").at("seed"), 42);
    EXPECT_GT(doc.at("price").at("stderr").get<double>(), 0.0);
}

TEST(Cli, PriceBondReportsQuantiles) {
    const auto r = run_cli("price bond --t 1 --T 5 --paths 2000 --seed 13 --step 0.0078125");
    ASSERT_EQ(r.code, 0);
    const json doc = json::parse(r.out);
    const auto& q = doc.at("quantiles");
    EXPECT_LT(q.at("q05").get<double>(), q.at("q50").get<double>());
    EXPECT_LT(q.at("q50").get<double>(), q.at("q95").get<double>());
    EXPECT_GT(doc.at("price").at("mean").get<double>(), 0.0);
    // t > 0 without a seed is refused
    EXPECT_EQ(run_cli("price bond --t 1 --T 5 --paths 100").code, 2);
}

TEST(Cli, PriceForwardIsDeterministic) {
    const auto r = run_cli("price forward --T 2 --Tprime 5 --kappa 0.8");
    ASSERT_EQ(r.code, 0);
    const json doc = json::parse(r.out);
    EXPECT_NEAR(doc.at("price").get<double>(), 0.054930848642637210, 1e-14);
    const auto& rep = doc.at("replication");
    EXPECT_DOUBLE_EQ(rep.at(0).get<double>(), -0.8);
    EXPECT_DOUBLE_EQ(rep.at(1).get<double>(), 1.0);
    EXPECT_DOUBLE_EQ(rep.at(2).get<double>(), 0.0);
}

TEST(Cli, RatesAtTimeZeroIsDeterministic) {
    const auto r = run_cli("rates --t 0 --T 5");
    ASSERT_EQ(r.code, 0);
    const json doc = json::parse(r.out);
    EXPECT_NEAR(doc.at("spot").get<double>(), 0.05, 1e-12);
    EXPECT_NEAR(doc.at("forward").get<double>(), 0.05, 1e-12);
    // t > 0 needs a seed
    EXPECT_EQ(run_cli("rates --t 1 --T 5").code, 2);
}

TEST(Cli, RatesIdentitySweepPasses) {
    const auto r = run_cli("rates --check-identities --seed 3");
    ASSERT_EQ(r.code, 0);
    const json doc = json::parse(r.out);
    EXPECT_TRUE(doc.at("pass").get<bool>());
    EXPECT_LT(doc.at("max_near_zero_relative_error").get<double>(), 1e-9);
    EXPECT_LT(doc.at("max_integral_error").get<double>(), 1e-6);
    EXPECT_LT(doc.at("max_reconstruction_error").get<double>(), 1e-6);
}

TEST(Cli, CheckStrategyPassesACappedShort) {
    const auto r = run_cli("--step 0.015625 check strategy --file " +
                           data_file("strategy_capped_short.json").string() +
                           " --paths 2000 --seed 31");
    ASSERT_EQ(r.code, 0);
    const json doc = json::parse(r.out);
    EXPECT_TRUE(doc.at("pass").get<bool>());
    EXPECT_TRUE(doc.at("tame").get<bool>());
    EXPECT_TRUE(doc.at("self_financing").get<bool>());
    EXPECT_EQ(doc.at("supermartingale").at("pairs").size(), 6u);
}

TEST(Cli, CheckStrategyFlagsAnUntameClaim) {
    // naked short claiming essentially no losses: the checker must find a
    // witness and exit with the statistical-failure code
    const auto file = temp_dir() / "untame.json";
    {
        std::ofstream f(file);
        f << R"({
  "model": { "sigma": 1.0, "curve": { "scheme": "flat", "rate": 0.05, "horizon": 10.0 } },
  "strategy": {
    "maturities": [5.0],
    "initial_positions": [-1.0],
    "close_out": { "type": "time", "t": 4.0 },
    "declared_tame_bound": -1e-06
  },
  "checkpoints": [1.0, 2.0]
})";
    }
    const auto r = run_cli("--step 0.015625 check strategy --file " + file.string() +
                           " --paths 500 --seed 97");
    EXPECT_EQ(r.code, 3);
    const json doc = json::parse(r.out);
    EXPECT_FALSE(doc.at("pass").get<bool>());
    EXPECT_FALSE(doc.at("tame").get<bool>());
    EXPECT_TRUE(doc.contains("witness_path"));
}

TEST(Cli, CheckStrategyRejectsMalformedFiles) {
    const auto file = temp_dir() / "broken.json";
    {
        std::ofstream f(file);
        f << "{ not json";
    }
    EXPECT_EQ(run_cli("check strategy --file " + file.string() + " --paths 10 --seed 1").code, 2);
    EXPECT_EQ(run_cli("check strategy --file /nonexistent.json --paths 10 --seed 1").code, 2);
}

TEST(Cli, DemoPitfallShowsTheGapAndTheControl) {
    const auto r = run_cli(
        "demo pitfall --T 5 --paths 2000 --seed 7 --scheme powerlaw --a 0.4 --b 1 --horizon 10");
    ASSERT_EQ(r.code, 0);
    const json doc = json::parse(r.out);
    EXPECT_NEAR(doc.at("correct").get<double>(), std::exp(2.0), 1e-12);
    EXPECT_GT(doc.at("z").get<double>(), 3.0);
    EXPECT_GT(doc.at("gap").get<double>(), 0.0);
    EXPECT_LT(doc.at("naive").at("mean").get<double>(), doc.at("correct").get<double>());
    // the stopped control straddles the truth within a few stderr
    const double sm = doc.at("stopped").at("mean").get<double>();
    const double sse = doc.at("stopped").at("stderr").get<double>();
    EXPECT_NEAR(sm, std::exp(2.0), 4.0 * sse);
}

TEST(Cli, OutFlagWritesTheArtifact) {
    const auto file = temp_dir() / "calib.json";
    fs::remove(file);
    const auto r = run_cli("--out " + file.string() + " calibrate --scheme powerlaw --a 0.5 --b 0.5 --horizon 1");
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream f(file);
    ASSERT_TRUE(f.good());
    const json doc = json::parse(f);
    EXPECT_EQ(doc.at("schema"), 1);
    EXPECT_NEAR(doc.at("F0").get<double>(), 0.5, 1e-12);
}
