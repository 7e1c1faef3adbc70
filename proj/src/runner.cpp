#include "netvmo/runner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "netvmo/error.hpp"

namespace netvmo {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "n/a";
  return fmt::format("{:.17g}", v);
}

std::string flag(bool b) { return b ? "true" : "false"; }

std::string vec(const Vec3& v) { return fmt::format("{} {} {}", num(v.x()), num(v.y()), num(v.z())); }

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << contents;
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path.string());
}

}  // namespace

GraphSummary summarize_graph(const CommGraph& graph) {
  GraphSummary out;
  out.diameter = graph.diameter();
  if (graph.size() <= kMaxTreeEnumerationNodes) {
    out.tree_cost_bound = min_spanning_tree_cost(graph).value;
  }
  return out;
}

AveragingBaseline scenario_baseline(const Scenario& scenario, const Network& network) {
  if (scenario.analysis.zeta) return make_baseline_with_zeta(network, *scenario.analysis.zeta);
  return make_baseline(network, scenario.analysis.zeta_margin);
}

RunResult run_scenario(const Scenario& scenario) {
  const Network network = build_network(scenario);
  RunResult result;
  result.baseline = scenario_baseline(scenario, network);
  result.graph = summarize_graph(network.graph());
  result.series = simulate(network, build_initial_state(scenario, network),
                           simulation_options(scenario));
  result.report = evaluate_run(result.series, result.baseline, scenario.analysis.epsilon,
                               scenario.analysis.tail_fraction);
  result.theory = theory_constants(
      result.baseline, scenario.gains, scenario.analysis.epsilon,
      result.graph.tree_cost_bound.value_or(static_cast<std::size_t>(-1)),
      result.graph.diameter);
  return result;
}

std::string format_series_csv(const Network& network, const RunResult& result) {
  const std::size_t n = network.size();
  std::string out =
      "# t [s]; p<i>x p<i>y p<i>z: estimate position of camera i in its own frame [m]; "
      "r<i>x r<i>y r<i>z: axis-angle of the world-frame estimate rotation R_wi*Rbar_i [rad]; "
      "U_p [m^2]; U_R [1]; lambda_size [count]; in_S [0/1]\n";
  out += "t";
  for (std::size_t i = 1; i <= n; ++i) {
    out += fmt::format(",p{0}x,p{0}y,p{0}z,r{0}x,r{0}y,r{0}z", i);
  }
  out += ",U_p,U_R,lambda_size,in_S\n";

  for (std::size_t k = 0; k < result.series.size(); ++k) {
    const ObserverState& state = result.series[k];
    const StepMetrics& m = result.report.steps[k];
    out += num(state.t);
    for (std::size_t i = 0; i < n; ++i) {
      const Pose& g = state.estimates[i];
      Vec3 r;
      try {
        r = log_so3(network.cameras()[i].world_pose.rotation * g.rotation);
      } catch (const Error& e) {
        throw Error(ErrorCode::kSimulationAbort,
                    fmt::format("camera {} at t = {}: {}", network.cameras()[i].id, state.t,
                                e.what()));
      }
      out += fmt::format(",{},{},{},{},{},{}", num(g.position.x()), num(g.position.y()),
                         num(g.position.z()), num(r.x()), num(r.y()), num(r.z()));
    }
    out += fmt::format(",{},{},{},{}\n", num(m.position_energy), num(m.orientation_energy),
                       m.lambda_size, m.in_S ? 1 : 0);
  }
  return out;
}

std::string format_summary(const Scenario& scenario, const Network& network,
                           const RunResult& r) {
  const AveragingBaseline& b = r.baseline;
  std::string out;
  auto put = [&out](std::string_view key, const std::string& value) {
    out += fmt::format("{} = {}\n", key, value);
  };
  std::string viewing;
  for (std::size_t i : b.viewing) {
    viewing += (viewing.empty() ? "" : " ") + std::to_string(network.cameras()[i].id);
  }

  put("cameras", std::to_string(network.size()));
  put("viewing_cameras", viewing);
  put("k_e", num(scenario.gains.k_e));
  put("k_s", num(scenario.gains.k_s));
  put("k", num(r.theory.k));
  put("p_star", vec(b.average.position));
  put("xi_theta_star", vec(log_so3(b.average.rotation)));
  put("rho_p", num(b.rho_p));
  put("rho_R", num(b.rho_R));
  put("phi_m", num(b.phi_m));
  put("zeta", num(b.zeta));
  put("beta", num(b.beta));
  put("beta_positive", flag(b.beta_positive()));
  put("W", r.graph.tree_cost_bound ? std::to_string(*r.graph.tree_cost_bound) : "n/a");
  put("diam", std::to_string(r.graph.diameter));
  put("epsilon", num(r.theory.epsilon));
  put("epsilon_R", num(r.theory.epsilon_R));
  put("epsilon_R_prime", num(r.theory.epsilon_R_prime));
  put("alpha_R", num(r.theory.alpha_R));
  put("performance_bounds_applicable", flag(r.theory.applicable));
  put("assumption_targets_distinct", flag(b.targets_distinct));
  put("assumption_targets_positive_cone", flag(b.targets_in_positive_cone));
  put("initial_in_S",
      flag(!r.report.steps.empty() && r.report.steps.front().in_S));
  put("time_varying_visibility", flag(network.has_time_varying_visibility()));
  put("moving_targets", flag(std::any_of(network.targets().begin(), network.targets().end(),
                                         [](const auto& v) {
                                           return v && !(v->body_velocity == Twist{});
                                         })));
  put("attained_epsilon_p", num(r.report.attained.position));
  put("attained_epsilon_R", num(r.report.attained.orientation));
  put("epsilon_level_p", flag(r.report.epsilon_level.position));
  put("epsilon_level_R", flag(r.report.epsilon_level.orientation));
  put("settled_U_p", num(r.report.settled_position_energy));
  put("settled_U_R", num(r.report.settled_orientation_energy));
  const bool entered = r.report.level_set_entry < r.report.steps.size();
  put("level_set_entry_t", entered ? num(r.series[r.report.level_set_entry].t) : "n/a");
  put("level_set_violations", std::to_string(r.report.level_set_violations));
  put("records", std::to_string(r.series.size()));
  return out;
}

RunResult run_to_directory(const Scenario& scenario, const std::filesystem::path& out_dir) {
  const Network network = build_network(scenario);
  RunResult result = run_scenario(scenario);
  const std::string csv = format_series_csv(network, result);
  const std::string summary = format_summary(scenario, network, result);
  std::filesystem::create_directories(out_dir);
  write_file(out_dir / "series.csv", csv);
  write_file(out_dir / "summary.txt", summary);
  return result;
}

SeriesTable parse_series_csv(std::string_view text) {
  SeriesTable table;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (table.columns.empty()) {
      for (auto c : cells) table.columns.emplace_back(c);
      continue;
    }
    if (cells.size() != table.columns.size()) {
      throw Error(ErrorCode::kParse,
                  fmt::format("series.csv:{}: {} columns, header declares {}", line_no,
                              cells.size(), table.columns.size()));
    }
    std::vector<double> row;
    for (auto c : cells) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc() || ptr != c.data() + c.size()) {
        throw Error(ErrorCode::kParse,
                    fmt::format("series.csv:{}: bad number '{}'", line_no, c));
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  if (table.columns.empty()) throw Error(ErrorCode::kParse, "series.csv: missing header");
  return table;
}

std::vector<ObserverState> states_from_series(const Network& network,
                                              const SeriesTable& table) {
  const std::size_t n = network.size();
  if (table.columns.size() != 1 + 6 * n + 4) {
    throw Error(ErrorCode::kValidation,
                fmt::format("series has {} columns, scenario with {} cameras needs {}",
                            table.columns.size(), n, 1 + 6 * n + 4));
  }
  std::vector<ObserverState> states;
  for (const auto& row : table.rows) {
    ObserverState s;
    s.t = row[0];
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = 1 + 6 * i;
      const Vec3 p{row[c], row[c + 1], row[c + 2]};
      const Vec3 r{row[c + 3], row[c + 4], row[c + 5]};
      s.estimates.push_back(
          {network.cameras()[i].world_pose.rotation.inverse() * exp_so3(r), p});
    }
    s.targets.assign(n, std::nullopt);
    states.push_back(std::move(s));
  }
  return states;
}

Recomputed recompute_from_series(const Scenario& scenario, const SeriesTable& table) {
  const Network network = build_network(scenario);
  const AveragingBaseline baseline = scenario_baseline(scenario, network);
  const auto states = states_from_series(network, table);
  Recomputed out;
  out.report = evaluate_run(states, baseline, scenario.analysis.epsilon,
                            scenario.analysis.tail_fraction);
  const std::size_t up = table.columns.size() - 4;
  for (std::size_t k = 0; k < states.size(); ++k) {
    out.max_position_energy_gap =
        std::max(out.max_position_energy_gap,
                 std::abs(out.report.steps[k].position_energy - table.rows[k][up]));
    out.max_orientation_energy_gap =
        std::max(out.max_orientation_energy_gap,
                 std::abs(out.report.steps[k].orientation_energy - table.rows[k][up + 1]));
  }
  return out;
}

}  // namespace netvmo
