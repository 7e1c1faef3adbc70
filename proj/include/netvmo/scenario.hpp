#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "netvmo/observer.hpp"
#include "netvmo/se3.hpp"

namespace netvmo {

struct CameraSpec {
  std::size_t id = 0;
  Vec3 position = Vec3::Zero();
  Vec3 orientation = Vec3::Zero();  // axis-angle, rad
  double focal_length = 0.03;
  bool visible = false;
  std::vector<VisibilityWindow> visible_windows;
  std::optional<Vec3> initial_position;
  std::optional<Vec3> initial_orientation;

  bool operator==(const CameraSpec&) const = default;
};

struct TargetSpec {
  std::size_t camera = 0;
  Vec3 position = Vec3::Zero();
  Vec3 orientation = Vec3::Zero();
  Vec6 velocity = Vec6::Zero();  // body velocity (v, w)

  bool operator==(const TargetSpec&) const = default;
};

struct IntegrationSpec {
  double dt = 1e-3;
  double t_final = 20.0;
  std::size_t record_every = 10;
  IntegrationScheme scheme = IntegrationScheme::kLieEuler;
  ErrorMode error_mode = ErrorMode::kVisual;

  bool operator==(const IntegrationSpec&) const = default;
};

struct AnalysisSpec {
  double zeta_margin = 0.1;
  std::optional<double> zeta;  // overrides zeta_margin when set
  double epsilon = 0.5;
  double tail_fraction = 0.2;

  bool operator==(const AnalysisSpec&) const = default;
};

inline const Vec3 kDefaultInitialPosition{0.0, 0.0, 1.0};

/// Full simulation configuration, as read from a scenario file. Camera and
/// graph indices are the 1-based ids used in the file.
struct Scenario {
  std::vector<CameraSpec> cameras;  // sorted by id
  std::vector<TargetSpec> targets;  // sorted by camera
  std::vector<Vec3> features;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  Gains gains;
  IntegrationSpec integration;
  AnalysisSpec analysis;

  bool operator==(const Scenario&) const = default;
};

/// Parses and validates scenario text. Throws kParse with line and column on
/// malformed input, kValidation naming the violated invariant, and
/// kDisconnectedGraph when the graph is not connected.
Scenario parse_scenario(std::string_view text, std::string_view source = "<input>");

Scenario load_scenario(const std::filesystem::path& path);

/// Canonical text form; parse_scenario(serialize(s)) == s.
std::string serialize(const Scenario& scenario);

/// Checks every scenario invariant. Called by parse_scenario.
void validate(const Scenario& scenario);

Network build_network(const Scenario& scenario);
/// Initial estimates (default p = [0, 0, 1], R = I) and target poses.
ObserverState build_initial_state(const Scenario& scenario, const Network& network);
SimulationOptions simulation_options(const Scenario& scenario);

}  // namespace netvmo
