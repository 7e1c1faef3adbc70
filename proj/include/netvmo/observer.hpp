#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "netvmo/camera.hpp"
#include "netvmo/comm_graph.hpp"
#include "netvmo/se3.hpp"

namespace netvmo {

enum class IntegrationScheme { kLieEuler, kMidpoint };

/// How a viewing camera obtains its estimation error: through the image
/// (synthesise, predict, reconstruct) or directly from the true relative pose.
enum class ErrorMode { kVisual, kGeometric };

/// Visual feedback gain k_e and mutual feedback gain k_s. k_s = 0 reduces
/// the network to independent single-camera observers.
struct Gains {
  double k_e = 1.0;
  double k_s = 1.0;

  /// k_e / k_s, +inf when k_s == 0.
  double ratio() const;
  /// Throws kInvalidArgument unless k_e > 0 and k_s >= 0.
  void validate() const;

  bool operator==(const Gains&) const = default;
};

/// Half-open interval [begin, end) during which a camera sees the target.
struct VisibilityWindow {
  double begin = 0.0;
  double end = 0.0;

  bool operator==(const VisibilityWindow&) const = default;
};

struct CameraNode {
  std::size_t id = 0;  // 1-based, as written in scenario files
  Pose world_pose;     // static: the camera body velocity is zero
  CameraIntrinsics intrinsics;
  bool visible = false;
  /// Empty means `visible` holds for all time.
  std::vector<VisibilityWindow> schedule;

  bool visible_at(double t) const;
  /// Whether the camera views the target at any time.
  bool ever_visible() const;
};

/// Fictitious target consistent with one camera's measurement.
struct TargetView {
  Pose world_pose;
  Twist body_velocity;
};

/// Static description of the camera network: extrinsics, per-camera target
/// views, shared features and the communication graph. Inter-camera
/// transports g_ij = g_wi^-1 g_wj are computed once from the extrinsics.
class Network {
 public:
  /// Throws kValidation on inconsistent sizes, on target views that do not
  /// match camera visibility, and kDisconnectedGraph on a disconnected graph.
  Network(std::vector<CameraNode> cameras, std::vector<std::optional<TargetView>> targets,
          FeatureModel features, CommGraph graph);

  std::size_t size() const { return cameras_.size(); }
  const std::vector<CameraNode>& cameras() const { return cameras_; }
  const std::vector<std::optional<TargetView>>& targets() const { return targets_; }
  const FeatureModel& features() const { return features_; }
  const CommGraph& graph() const { return graph_; }

  /// g_ij for the k-th neighbour j of camera i (graph().neighbors(i)[k]).
  const Pose& transport(std::size_t i, std::size_t k) const { return transport_[i][k]; }

  /// Indices of cameras holding a target view.
  std::vector<std::size_t> viewing_cameras() const;
  bool has_time_varying_visibility() const;

 private:
  std::vector<CameraNode> cameras_;
  std::vector<std::optional<TargetView>> targets_;
  FeatureModel features_;
  CommGraph graph_;
  std::vector<std::vector<Pose>> transport_;
};

/// Snapshot of the observer network at time t. `estimates[i]` is camera i's
/// estimate of the average pose expressed in its own frame; `targets[i]` is
/// the current world pose of its fictitious target, if any.
struct ObserverState {
  double t = 0.0;
  std::vector<Pose> estimates;
  std::vector<std::optional<Pose>> targets;

  bool operator==(const ObserverState&) const = default;
};

/// State at t = 0 with the given estimates and the network's target poses.
ObserverState initial_state(const Network& network, std::vector<Pose> estimates);

/// g_wi^-1 g_wj
Pose relative_pose(const Pose& g_wi, const Pose& g_wj);

/// Estimation error of a viewing camera, pose_error(g_bar^-1 g_io) either
/// exactly or as reconstructed from the visual measurement.
ErrorVector estimation_error(const CameraNode& camera, const FeatureModel& features,
                             const Pose& estimate, const Pose& camera_to_target,
                             ErrorMode mode);

/// u_i = delta_i k_e e_i + k_s sum_{j in N_i} pose_error(g_bar_i^-1 g_ij g_bar_j).
/// Cameras not viewing the target at state.t synthesise no measurement.
Twist observer_input(const Network& network, const ObserverState& state, std::size_t i,
                     const Gains& gains, ErrorMode mode);

struct StepOptions {
  Gains gains;
  double dt = 1e-3;
  IntegrationScheme scheme = IntegrationScheme::kLieEuler;
  ErrorMode error_mode = ErrorMode::kVisual;
};

/// Advances every estimate by g_bar_i <- g_bar_i exp(dt u_i) with all inputs
/// taken from the same snapshot (midpoint scheme: inputs from the half-step
/// state), and every moving target along its body velocity. Camera-model
/// failures surface as kSimulationAbort naming the camera and time.
ObserverState step(const Network& network, const ObserverState& state,
                   const StepOptions& options);

struct SimulationOptions {
  StepOptions step;
  double t_final = 20.0;
  std::size_t record_every = 10;  // steps between records
};

/// Integrates from `initial` to t_final. Records the initial state, every
/// record_every-th step, and the final state. Times are k * dt.
std::vector<ObserverState> simulate(const Network& network, const ObserverState& initial,
                                    const SimulationOptions& options);

}  // namespace netvmo
