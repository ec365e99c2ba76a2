#include "ionnode/cli.hpp"
#include "ionnode/scenario.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ionnode;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run cli_run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "ionnode_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string last_line(const std::string& s) {
    auto end = s.find_last_not_of('\n');
    auto start = s.rfind('\n', end);
    return s.substr(start == std::string::npos ? 0 : start + 1, end - (start == std::string::npos ? 0 : start + 1) + 1);
}

json minimal() {
    return {{"name", "t"},
            {"node",
             {{"objective_eff", 0.06}, {"fiber_coupling", 0.32}, {"fiber_transmission", 0.8}, {"other_optics", 0.75},
              {"detector_eff", 0.4}, {"attempt_rate", 264e3}, {"fiber_length", 3.0}}}};
}

}  // namespace

TEST(Scenario, ShippedScenariosRoundTrip) {
    const auto names = scenario::list_scenarios();
    for (const char* n : {"paper-3m", "paper-1km", "paper-12km", "paper-3m-future", "paper-1km-future",
                          "paper-12km-future", "paper-S13"})
        EXPECT_NE(std::find(names.begin(), names.end(), n), names.end()) << n;
    for (const auto& n : names) {
        const auto s = scenario::load(n);
        const auto once = scenario::serialize(s);
        const auto twice = scenario::serialize(scenario::parse(once));
        EXPECT_EQ(once, twice) << n;
        EXPECT_EQ(scenario::scenario_hash(s), scenario::scenario_hash(scenario::parse(once))) << n;
    }
}

TEST(Scenario, UnknownFieldReportedWithPath) {
    auto doc = minimal();
    doc["node"]["detector_efff"] = 0.4;
    try {
        scenario::parse(doc);
        FAIL();
    } catch (const scenario::ConfigError& e) {
        EXPECT_EQ(std::string(e.what()).rfind("node.detector_efff", 0), 0u) << e.what();
    }
}

TEST(Scenario, MissingAndMistypedFields) {
    auto doc = minimal();
    doc["node"].erase("attempt_rate");
    EXPECT_THROW(scenario::parse(doc), scenario::ConfigError);
    doc = minimal();
    doc["node"]["fiber_length"] = "long";
    try {
        scenario::parse(doc);
        FAIL();
    } catch (const scenario::ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("node.fiber_length"), std::string::npos);
    }
}

TEST(Scenario, OutOfRangeValueNamesField) {
    auto doc = minimal();
    doc["node"]["detector_eff"] = 1.4;
    try {
        scenario::parse(doc);
        FAIL();
    } catch (const scenario::ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("node.detector_eff"), std::string::npos) << e.what();
    }
}

TEST(Scenario, UnknownName) { EXPECT_THROW(scenario::load("no-such-scenario"), scenario::ConfigError); }

TEST(Scenario, GeometryGivesMemoryScale) {
    const auto s = scenario::load("paper-S13");
    EXPECT_NEAR(s.crosstalk.at(0).op.memory_scale, std::exp(-0.81), 1e-15);
}

TEST(Cli, BudgetFinalCell) {
    const auto r = cli_run({"budget", "--scenario", "paper-3m"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(last_line(r.out), "rate,Success rate,46.2");
    const auto j = cli_run({"budget", "--scenario", "paper-12km", "--format", "json"});
    ASSERT_EQ(j.code, 0);
    EXPECT_NEAR(json::parse(j.out)["infidelity"]["Total infidelity"].get<double>(), 0.123, 1e-12);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(cli_run({"budget", "--scenario", "no-such-scenario"}).code, cli::kExitConfig);
    EXPECT_EQ(cli_run({"frobnicate"}).code, cli::kExitConfig);
    EXPECT_EQ(cli_run({"simulate-node", "--scenario", "paper-3m", "--sequences", "abc"}).code, cli::kExitConfig);
    EXPECT_EQ(cli_run({"swap-curve", "--rates", "5..1"}).code, cli::kExitConfig);

    const auto bad = scratch("bad.json");
    auto doc = minimal();
    doc["node"]["objective_eff"] = -1;
    std::ofstream(bad) << doc.dump();
    const auto r = cli_run({"budget", "--scenario", bad.string()});
    EXPECT_EQ(r.code, cli::kExitConfig);
    EXPECT_NE(r.err.find("node.objective_eff"), std::string::npos) << r.err;
}

TEST(Cli, NumericalFailureExitCode) {
    // Identical timestamps: the fit has no spread to resolve.
    const auto in = scratch("flat.csv");
    {
        std::ofstream f(in);
        f << "t_ns\n";
        for (int i = 0; i < 20; ++i) f << "1.0\n";
    }
    EXPECT_EQ(cli_run({"fit-histogram", "--input", in.string()}).code, cli::kExitNumerical);
}

TEST(Cli, SidecarAndByteStability) {
    const auto a = scratch("a.csv"), b = scratch("b.csv");
    for (const auto& [path, workers] : {std::pair{a, "1"}, std::pair{b, "8"}}) {
        const auto r = cli_run({"simulate-node", "--scenario", "paper-3m", "--seed", "7", "--sequences", "2e3",
                                "--workers", workers, "--out", path.string()});
        ASSERT_EQ(r.code, 0) << r.err;
    }
    EXPECT_EQ(slurp(a), slurp(b));
    const auto meta = json::parse(slurp(a.string() + ".meta.json"));
    EXPECT_EQ(meta["seed"], 7);
    EXPECT_EQ(meta["scenario"], "paper-3m");
    EXPECT_EQ(meta["hash"], scenario::scenario_hash(scenario::load("paper-3m")));
    EXPECT_EQ(meta["version"], cli::version());
    EXPECT_EQ(slurp(a).substr(0, 9), "sequence,");
}

TEST(Cli, SwapCurveHeaderAndLimits) {
    const auto r = cli_run({"swap-curve", "--rates", "0.001..10000", "--points", "5", "--t1", "0.79", "--t2", "0.323",
                            "--trials", "0", "--unconditioned"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "rate,success,fidelity,mc_success,mc_fidelity");
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> v;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) v.push_back(std::stod(c));
        rows.push_back(v);
    }
    ASSERT_EQ(rows.size(), 5u);
    EXPECT_NEAR(rows.front()[1], 0.0, 1e-3);
    EXPECT_NEAR(rows.front()[2], 0.5, 1e-3);
    EXPECT_NEAR(rows.back()[1], 1.0, 1e-3);
    EXPECT_NEAR(rows.back()[2], 1.0, 1e-3);
}

TEST(Cli, OtherSubcommands) {
    EXPECT_EQ(cli_run({"crosstalk-report"}).code, 0);
    EXPECT_EQ(cli_run({"herald-table", "--scenario", "paper-1km"}).code, 0);
    EXPECT_EQ(cli_run({"herald-table", "--scenario", "paper-3m", "--format", "json"}).code, 0);
    const auto t = cli_run({"tomography-demo", "--shots", "2e4", "--seed", "3"});
    ASSERT_EQ(t.code, 0) << t.err;
    EXPECT_GT(json::parse(t.out)["reconstructed_fidelity"].get<double>(), 0.99);
    const auto h = cli_run({"fit-histogram", "--samples", "2e4", "--seed", "5"});
    ASSERT_EQ(h.code, 0) << h.err;
    EXPECT_NEAR(json::parse(h.out)["decay_tau"].get<double>(), 6.936, 0.3);
}
