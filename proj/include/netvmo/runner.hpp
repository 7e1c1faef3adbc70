#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netvmo/metrics.hpp"
#include "netvmo/observer.hpp"
#include "netvmo/scenario.hpp"

namespace netvmo {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitSuccess = 0,
  kExitInvalidInput = 2,
  kExitSimulationAbort = 3,
  kExitPropertyFailure = 4,
};

/// Graph quantities reported alongside a run. The tree-cost bound is only
/// computed for graphs small enough to enumerate.
struct GraphSummary {
  std::optional<std::size_t> tree_cost_bound;
  std::size_t diameter = 0;
};

GraphSummary summarize_graph(const CommGraph& graph);

AveragingBaseline scenario_baseline(const Scenario& scenario, const Network& network);

struct RunResult {
  AveragingBaseline baseline;
  std::vector<ObserverState> series;
  PerformanceReport report;
  GraphSummary graph;
  TheoryConstants theory;
};

/// Simulates the scenario and evaluates every performance metric.
RunResult run_scenario(const Scenario& scenario);

/// One header comment naming units, one column header, one row per record.
std::string format_series_csv(const Network& network, const RunResult& result);

/// `symbol = value` lines.
std::string format_summary(const Scenario& scenario, const Network& network,
                           const RunResult& result);

/// Runs the scenario and writes series.csv and summary.txt into out_dir.
RunResult run_to_directory(const Scenario& scenario, const std::filesystem::path& out_dir);

/// Parsed series.csv.
struct SeriesTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Throws kParse when any row's column count differs from the header.
SeriesTable parse_series_csv(std::string_view text);

/// Rebuilds observer states (t, estimates) from a recorded table.
std::vector<ObserverState> states_from_series(const Network& network,
                                              const SeriesTable& table);

/// Metrics recomputed from a recorded run, with the largest deviation from
/// the recorded U_p and U_R columns.
struct Recomputed {
  PerformanceReport report;
  double max_position_energy_gap = 0.0;
  double max_orientation_energy_gap = 0.0;
};

Recomputed recompute_from_series(const Scenario& scenario, const SeriesTable& table);

}  // namespace netvmo
