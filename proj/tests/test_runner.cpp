#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "netvmo/error.hpp"
#include "netvmo/property_suite.hpp"
#include "netvmo/runner.hpp"

namespace netvmo {
namespace {

namespace fs = std::filesystem;

const std::string kScenarioDir = NETVMO_SCENARIO_DIR;
const std::string kCli = NETVMO_CLI;

Scenario reference() { return load_scenario(kScenarioDir + "/reference.scn"); }

Scenario short_reference() {
  Scenario s = reference();
  s.integration.t_final = 1.0;
  return s;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("netvmo_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string csv_for(const Scenario& s) {
  const Network network = build_network(s);
  return format_series_csv(network, run_scenario(s));
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string command = kCli + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(SeriesCsv, HeaderAndCommentLine) {
  const std::string csv = csv_for(short_reference());
  std::istringstream in(csv);
  std::string comment, header;
  std::getline(in, comment);
  std::getline(in, header);
  EXPECT_EQ(comment.front(), '#');
  EXPECT_NE(comment.find("[m]"), std::string::npos);
  EXPECT_NE(comment.find("[rad]"), std::string::npos);
  EXPECT_EQ(header.rfind("t,p1x,p1y,p1z,r1x,r1y,r1z,p2x", 0), 0u);
  EXPECT_NE(header.find(",r5z,U_p,U_R,lambda_size,in_S"), std::string::npos);
  const SeriesTable table = parse_series_csv(csv);
  EXPECT_EQ(table.columns.size(), 1u + 6 * 5 + 4);
  EXPECT_EQ(table.rows.size(), 101u);  // 1000 steps, every 10th plus t = 0
}

TEST(SeriesCsv, ZeroFinalTimeGivesOneRow) {
  Scenario s = reference();
  s.integration.t_final = 0.0;
  const SeriesTable table = parse_series_csv(csv_for(s));
  ASSERT_EQ(table.rows.size(), 1u);
  EXPECT_EQ(table.rows[0][0], 0.0);
}

TEST(SeriesCsv, ByteIdenticalAcrossRuns) {
  const Scenario s = short_reference();
  EXPECT_EQ(csv_for(s), csv_for(s));
}

TEST(SeriesCsv, ColumnMismatchIsAParseError) {
  try {
    parse_series_csv("# c\nt,a,b\n0,1,2\n1,2\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find("series.csv:4"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_series_csv("t,a\n0,x\n"), Error);
}

TEST(SeriesCsv, RecomputedMetricsMatchRecordedColumns) {
  const Scenario s = short_reference();
  const Recomputed r = recompute_from_series(s, parse_series_csv(csv_for(s)));
  EXPECT_LT(r.max_position_energy_gap, 1e-12);
  EXPECT_LT(r.max_orientation_energy_gap, 1e-12);
  EXPECT_EQ(r.report.steps.size(), 101u);
}

TEST(SeriesCsv, StatesRoundTrip) {
  const Scenario s = short_reference();
  const Network network = build_network(s);
  const RunResult run = run_scenario(s);
  const auto states = states_from_series(network, parse_series_csv(format_series_csv(network, run)));
  ASSERT_EQ(states.size(), run.series.size());
  for (std::size_t k = 0; k < states.size(); k += 25) {
    EXPECT_EQ(states[k].t, run.series[k].t);
    for (std::size_t i = 0; i < network.size(); ++i) {
      EXPECT_LT((states[k].estimates[i].position - run.series[k].estimates[i].position).norm(),
                1e-15);
      EXPECT_LT((states[k].estimates[i].rotation.matrix() - run.series[k].estimates[i].rotation.matrix())
                    .norm(),
                1e-12);
    }
  }
  EXPECT_THROW(states_from_series(network, parse_series_csv("t,a\n0,1\n")), Error);
}

TEST(RunToDirectory, WritesSummaryKeys) {
  const fs::path dir = scratch("summary");
  run_to_directory(short_reference(), dir);
  ASSERT_TRUE(fs::exists(dir / "series.csv"));
  const std::string summary = read_file(dir / "summary.txt");
  for (const char* key : {"rho_p", "rho_R", "phi_m", "zeta", "beta", "W", "diam", "epsilon_R",
                          "epsilon_R_prime", "alpha_R", "k", "settled_U_p"}) {
    EXPECT_NE(summary.find(std::string("\n") + key + " = "), std::string::npos) << key;
  }
  EXPECT_NE(summary.find("\nW = 3\n"), std::string::npos);
  EXPECT_NE(summary.find("\ndiam = 2\n"), std::string::npos);
}

TEST(GraphSummary, LargeGraphSkipsTreeCost) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < 14; ++i) edges.emplace_back(i, i + 1);
  const GraphSummary g = summarize_graph(CommGraph(14, edges));
  EXPECT_FALSE(g.tree_cost_bound.has_value());
  EXPECT_EQ(g.diameter, 13u);
}

TEST(PropertySuite, PassesWithDefaultSeed) {
  const SuiteReport report = run_property_suite(SuiteOptions{42, 10000, false});
  EXPECT_TRUE(report.passed()) << report.format();
  EXPECT_FALSE(report.vacuous);
  EXPECT_EQ(report.checks.size(), 6u);
  for (const auto& c : report.checks) EXPECT_GT(c.trials, 0u) << c.name;
}

TEST(PropertySuite, ZeroTrialsIsVacuous) {
  const SuiteReport report = run_property_suite(SuiteOptions{42, 0, false});
  EXPECT_TRUE(report.vacuous);
  EXPECT_NE(report.format().find("warning"), std::string::npos) << report.format();
}

TEST(PropertySuite, CorruptedCheckFails) {
  const SuiteReport report = run_property_suite(SuiteOptions{42, 1000, true});
  EXPECT_FALSE(report.passed());
  EXPECT_NE(report.format().find("[FAIL] trace inequality"), std::string::npos)
      << report.format();
}

TEST(Cli, SimulateWritesOutputs) {
  const fs::path dir = scratch("cli_simulate");
  const std::string args = "simulate " + kScenarioDir + "/reference.scn --out " + (dir / "out").string() +
                           " --tfinal 0.5";
  EXPECT_EQ(run_cli(args, dir / "log.txt"), 0) << read_file(dir / "log.txt");
  EXPECT_TRUE(fs::exists(dir / "out" / "series.csv"));
  EXPECT_NE(read_file(dir / "log.txt").find("rho_p = "), std::string::npos);

  const std::string report_args =
      "report " + (dir / "out" / "series.csv").string() + " " + kScenarioDir + "/reference.scn";
  // The recorded run used t_final 0.5; the report only needs the scenario geometry.
  EXPECT_EQ(run_cli(report_args, dir / "report.txt"), 0) << read_file(dir / "report.txt");
}

TEST(Cli, MeanPrintsBaseline) {
  const fs::path dir = scratch("cli_mean");
  EXPECT_EQ(run_cli("mean " + kScenarioDir + "/reference.scn", dir / "log.txt"), 0);
  const std::string out = read_file(dir / "log.txt");
  EXPECT_NE(out.find("p_star = "), std::string::npos) << out;
  EXPECT_NE(out.find("W = 3"), std::string::npos) << out;
}

TEST(Cli, VerifyExitCodes) {
  const fs::path dir = scratch("cli_verify");
  EXPECT_EQ(run_cli("verify --trials 200", dir / "log.txt"), 0) << read_file(dir / "log.txt");
  EXPECT_EQ(run_cli("verify --trials 0", dir / "log0.txt"), 0);
  EXPECT_NE(read_file(dir / "log0.txt").find("warning"), std::string::npos);
}

TEST(Cli, InvalidInputExitsTwo) {
  const fs::path dir = scratch("cli_invalid");
  std::ofstream(dir / "bad.scn") << "[camera]\nid = 1\nposition = 0 0\n";
  EXPECT_EQ(run_cli("simulate " + (dir / "bad.scn").string(), dir / "log.txt"), 2);
  EXPECT_NE(read_file(dir / "log.txt").find("bad.scn:3:"), std::string::npos)
      << read_file(dir / "log.txt");
  EXPECT_EQ(run_cli("mean " + (dir / "missing.scn").string(), dir / "log2.txt"), 2);
  EXPECT_EQ(run_cli("simulate", dir / "log3.txt"), 2);
  EXPECT_EQ(run_cli("no_such_command", dir / "log4.txt"), 2);
}

TEST(Cli, SimulationAbortExitsThree) {
  // A target 0.2 m ahead of a visible camera, receding toward and past it.
  const fs::path dir = scratch("cli_abort");
  std::ofstream(dir / "abort.scn") << "[camera]\nid = 1\nposition = 0 0 0\nvisible = true\n"
                                      "initial_position = 0 0 0.3\n"
                                      "[target]\ncamera = 1\nposition = 0 0 0.3\n"
                                      "velocity = 0 0 -1 0 0 0\n"
                                      "[integration]\nt_final = 1\nerror_mode = visual\n";
  EXPECT_EQ(run_cli("simulate " + (dir / "abort.scn").string() + " --out " +
                        (dir / "out").string(),
                    dir / "log.txt"),
            3)
      << read_file(dir / "log.txt");
  EXPECT_NE(read_file(dir / "log.txt").find("camera 1"), std::string::npos)
      << read_file(dir / "log.txt");
}

TEST(Cli, BundledScenariosRun) {
  for (const char* name : {"single_camera.scn", "ring_visual.scn"}) {
    const fs::path dir = scratch(std::string("cli_") + name);
    EXPECT_EQ(run_cli("simulate " + kScenarioDir + "/" + name + " --out " + (dir / "out").string(),
                      dir / "log.txt"),
              0)
        << name << "\n"
        << read_file(dir / "log.txt");
    EXPECT_TRUE(fs::exists(dir / "out" / "summary.txt")) << name;
  }
}

}  // namespace
}  // namespace netvmo
