// Command-line front end: simulate, verify, report, mean.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "netvmo/error.hpp"
#include "netvmo/property_suite.hpp"
#include "netvmo/runner.hpp"
#include "netvmo/scenario.hpp"

namespace {

using namespace netvmo;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse:
    case ErrorCode::kValidation:
    case ErrorCode::kDisconnectedGraph:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kNoBaseline:
    case ErrorCode::kGraphSizeLimit:
      return kExitInvalidInput;
    default:
      return kExitSimulationAbort;
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParse, path.string() + ": cannot open");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct SimulateArgs {
  std::string scenario;
  std::string out = "out";
  std::optional<double> k_s, k_e, dt, t_final;
};

int run_simulate(const SimulateArgs& a) {
  Scenario s = load_scenario(a.scenario);
  if (a.k_s) s.gains.k_s = *a.k_s;
  if (a.k_e) s.gains.k_e = *a.k_e;
  if (a.dt) s.integration.dt = *a.dt;
  if (a.t_final) s.integration.t_final = *a.t_final;
  validate(s);
  run_to_directory(s, a.out);
  std::cout << read_text(std::filesystem::path(a.out) / "summary.txt");
  return kExitSuccess;
}

int run_verify(std::uint64_t seed, std::size_t trials) {
  SuiteOptions options;
  options.seed = seed;
  options.trials = trials;
  const SuiteReport report = run_property_suite(options);
  std::cout << report.format();
  if (report.vacuous) std::cerr << "warning: verify ran with --trials 0\n";
  return report.passed() ? kExitSuccess : kExitPropertyFailure;
}

int run_report(const std::string& csv_path, const std::string& scenario_path) {
  const Scenario s = load_scenario(scenario_path);
  const SeriesTable table = parse_series_csv(read_text(csv_path));
  const Recomputed r = recompute_from_series(s, table);
  fmt::print("records = {}\n", table.rows.size());
  fmt::print("attained_epsilon_p = {:.17g}\n", r.report.attained.position);
  fmt::print("attained_epsilon_R = {:.17g}\n", r.report.attained.orientation);
  fmt::print("epsilon_level_p = {}\n", r.report.epsilon_level.position);
  fmt::print("epsilon_level_R = {}\n", r.report.epsilon_level.orientation);
  fmt::print("settled_U_p = {:.17g}\n", r.report.settled_position_energy);
  fmt::print("settled_U_R = {:.17g}\n", r.report.settled_orientation_energy);
  fmt::print("level_set_violations = {}\n", r.report.level_set_violations);
  fmt::print("max_U_p_gap = {:.3g}\n", r.max_position_energy_gap);
  fmt::print("max_U_R_gap = {:.3g}\n", r.max_orientation_energy_gap);
  return kExitSuccess;
}

int run_mean(const std::string& scenario_path) {
  const Scenario s = load_scenario(scenario_path);
  const Network network = build_network(s);
  const AveragingBaseline b = scenario_baseline(s, network);
  const GraphSummary g = summarize_graph(network.graph());
  const Vec3 p = b.average.position;
  const Vec3 r = log_so3(b.average.rotation);
  fmt::print("p_star = {:.17g} {:.17g} {:.17g}\n", p.x(), p.y(), p.z());
  fmt::print("xi_theta_star = {:.17g} {:.17g} {:.17g}\n", r.x(), r.y(), r.z());
  fmt::print("rho_p = {:.17g}\n", b.rho_p);
  fmt::print("rho_R = {:.17g}\n", b.rho_R);
  fmt::print("phi_m = {:.17g}\n", b.phi_m);
  fmt::print("zeta = {:.17g}\n", b.zeta);
  fmt::print("beta = {:.17g}\n", b.beta);
  fmt::print("W = {}\n", g.tree_cost_bound ? std::to_string(*g.tree_cost_bound) : "n/a");
  fmt::print("diam = {}\n", g.diameter);
  return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Networked visual motion observer simulator"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "run a scenario and write series.csv and summary.txt");
  simulate_cmd->add_option("scenario", sim.scenario, "scenario file")->required();
  simulate_cmd->add_option("--out", sim.out, "output directory");
  simulate_cmd->add_option("--ks", sim.k_s, "mutual feedback gain override");
  simulate_cmd->add_option("--ke", sim.k_e, "visual feedback gain override");
  simulate_cmd->add_option("--dt", sim.dt, "step size override [s]");
  simulate_cmd->add_option("--tfinal", sim.t_final, "final time override [s]");

  std::uint64_t seed = 42;
  std::size_t trials = 10000;
  auto* verify_cmd = app.add_subcommand("verify", "run the seeded property suite");
  verify_cmd->add_option("--seed", seed, "random seed");
  verify_cmd->add_option("--trials", trials, "trials per check");

  std::string csv_path, report_scenario;
  auto* report_cmd = app.add_subcommand("report", "recompute metrics from a recorded run");
  report_cmd->add_option("series", csv_path, "series.csv")->required();
  report_cmd->add_option("scenario", report_scenario, "scenario file")->required();

  std::string mean_scenario;
  auto* mean_cmd = app.add_subcommand("mean", "print the averaging baseline");
  mean_cmd->add_option("scenario", mean_scenario, "scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitSuccess : kExitInvalidInput;
  }

  try {
    if (*simulate_cmd) return run_simulate(sim);
    if (*verify_cmd) return run_verify(seed, trials);
    if (*report_cmd) return run_report(csv_path, report_scenario);
    if (*mean_cmd) return run_mean(mean_scenario);
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSimulationAbort;
  }
  return kExitInvalidInput;
}
