#include "netvmo/observer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include <fmt/format.h>

#include "netvmo/error.hpp"

namespace netvmo {

double Gains::ratio() const {
  return k_s == 0.0 ? std::numeric_limits<double>::infinity() : k_e / k_s;
}

void Gains::validate() const {
  if (!(k_e > 0.0) || !std::isfinite(k_e)) {
    throw Error(ErrorCode::kInvalidArgument, "k_e must be positive");
  }
  if (!(k_s >= 0.0) || !std::isfinite(k_s)) {
    throw Error(ErrorCode::kInvalidArgument, "k_s must be non-negative");
  }
}

bool CameraNode::visible_at(double t) const {
  if (schedule.empty()) return visible;
  return std::any_of(schedule.begin(), schedule.end(),
                     [t](const VisibilityWindow& w) { return t >= w.begin && t < w.end; });
}

bool CameraNode::ever_visible() const {
  if (schedule.empty()) return visible;
  return std::any_of(schedule.begin(), schedule.end(),
                     [](const VisibilityWindow& w) { return w.end > w.begin; });
}

Network::Network(std::vector<CameraNode> cameras,
                 std::vector<std::optional<TargetView>> targets, FeatureModel features,
                 CommGraph graph)
    : cameras_(std::move(cameras)),
      targets_(std::move(targets)),
      features_(std::move(features)),
      graph_(std::move(graph)) {
  if (cameras_.empty()) throw Error(ErrorCode::kValidation, "network has no cameras");
  if (targets_.size() != cameras_.size() || graph_.size() != cameras_.size()) {
    throw Error(ErrorCode::kValidation, "camera, target and graph sizes differ");
  }
  for (std::size_t i = 0; i < cameras_.size(); ++i) {
    if (cameras_[i].ever_visible() != targets_[i].has_value()) {
      throw Error(ErrorCode::kValidation,
                  fmt::format("camera {}: a target view is required exactly when the "
                              "camera is visible",
                              cameras_[i].id));
    }
    if (!(cameras_[i].intrinsics.focal_length > 0.0)) {
      throw Error(ErrorCode::kValidation,
                  fmt::format("camera {}: focal length must be positive", cameras_[i].id));
    }
  }
  if (!graph_.is_connected()) {
    throw Error(ErrorCode::kDisconnectedGraph, "communication graph is not connected");
  }
  transport_.resize(cameras_.size());
  for (std::size_t i = 0; i < cameras_.size(); ++i) {
    for (std::size_t j : graph_.neighbors(i)) {
      transport_[i].push_back(relative_pose(cameras_[i].world_pose, cameras_[j].world_pose));
    }
  }
}

std::vector<std::size_t> Network::viewing_cameras() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < targets_.size(); ++i) {
    if (targets_[i]) out.push_back(i);
  }
  return out;
}

bool Network::has_time_varying_visibility() const {
  return std::any_of(cameras_.begin(), cameras_.end(),
                     [](const CameraNode& c) { return !c.schedule.empty(); });
}

ObserverState initial_state(const Network& network, std::vector<Pose> estimates) {
  if (estimates.size() != network.size()) {
    throw Error(ErrorCode::kInvalidArgument, "one initial estimate per camera is required");
  }
  ObserverState state;
  state.estimates = std::move(estimates);
  for (const auto& view : network.targets()) {
    state.targets.push_back(view ? std::optional<Pose>(view->world_pose) : std::nullopt);
  }
  return state;
}

Pose relative_pose(const Pose& g_wi, const Pose& g_wj) { return g_wi.inverse() * g_wj; }

ErrorVector estimation_error(const CameraNode& camera, const FeatureModel& features,
                             const Pose& estimate, const Pose& camera_to_target,
                             ErrorMode mode) {
  if (mode == ErrorMode::kGeometric) {
    return pose_error(estimate.inverse() * camera_to_target);
  }
  const VisualMeasurement f = measure(camera.intrinsics, features, camera_to_target);
  return reconstruct_error(camera.intrinsics, features, estimate, f);
}

Twist observer_input(const Network& network, const ObserverState& state, std::size_t i,
                     const Gains& gains, ErrorMode mode) {
  const CameraNode& camera = network.cameras().at(i);
  const Pose& estimate = state.estimates.at(i);
  ErrorVector u = ErrorVector::Zero();

  if (camera.visible_at(state.t) && state.targets.at(i)) {
    const Pose camera_to_target = relative_pose(camera.world_pose, *state.targets[i]);
    try {
      u += gains.k_e *
           estimation_error(camera, network.features(), estimate, camera_to_target, mode);
    } catch (const Error& e) {
      throw Error(ErrorCode::kSimulationAbort,
                  fmt::format("camera {} at t = {}: {}", camera.id, state.t, e.what()));
    }
  }

  if (gains.k_s != 0.0) {
    const Pose estimate_inv = estimate.inverse();
    const auto& neighbors = network.graph().neighbors(i);
    ErrorVector mutual = ErrorVector::Zero();
    for (std::size_t k = 0; k < neighbors.size(); ++k) {
      const Pose transported = network.transport(i, k) * state.estimates[neighbors[k]];
      mutual += pose_error(estimate_inv * transported);
    }
    u += gains.k_s * mutual;
  }
  return Twist::from_vector(u);
}

namespace {

std::vector<Twist> all_inputs(const Network& network, const ObserverState& state,
                              const StepOptions& options) {
  std::vector<Twist> inputs;
  inputs.reserve(network.size());
  for (std::size_t i = 0; i < network.size(); ++i) {
    inputs.push_back(observer_input(network, state, i, options.gains, options.error_mode));
  }
  return inputs;
}

ObserverState advance(const Network& network, const ObserverState& state,
                      const std::vector<Twist>& inputs, double dt) {
  ObserverState next;
  next.t = state.t + dt;
  next.estimates.reserve(state.estimates.size());
  for (std::size_t i = 0; i < state.estimates.size(); ++i) {
    if (inputs[i] == Twist{}) {
      next.estimates.push_back(state.estimates[i]);
    } else {
      next.estimates.push_back(state.estimates[i] * exp_se3(inputs[i] * dt));
    }
  }
  next.targets = state.targets;
  for (std::size_t i = 0; i < next.targets.size(); ++i) {
    const auto& view = network.targets()[i];
    if (next.targets[i] && view && !(view->body_velocity == Twist{})) {
      *next.targets[i] = *next.targets[i] * exp_se3(view->body_velocity * dt);
    }
  }
  return next;
}

}  // namespace

ObserverState step(const Network& network, const ObserverState& state,
                   const StepOptions& options) {
  if (!(options.dt > 0.0)) throw Error(ErrorCode::kInvalidArgument, "dt must be positive");
  if (options.scheme == IntegrationScheme::kLieEuler) {
    return advance(network, state, all_inputs(network, state, options), options.dt);
  }
  const ObserverState half =
      advance(network, state, all_inputs(network, state, options), 0.5 * options.dt);
  return advance(network, state, all_inputs(network, half, options), options.dt);
}

std::vector<ObserverState> simulate(const Network& network, const ObserverState& initial,
                                    const SimulationOptions& options) {
  options.step.gains.validate();
  if (!(options.step.dt > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "dt must be positive");
  }
  if (!(options.t_final >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "t_final must be non-negative");
  }
  const std::size_t every = std::max<std::size_t>(options.record_every, 1);
  const auto steps =
      static_cast<std::size_t>(std::llround(options.t_final / options.step.dt));

  std::vector<ObserverState> records{initial};
  ObserverState state = initial;
  const double t0 = initial.t;
  for (std::size_t k = 1; k <= steps; ++k) {
    state = step(network, state, options.step);
    state.t = t0 + static_cast<double>(k) * options.step.dt;
    if (k % every == 0 || k == steps) records.push_back(state);
  }
  return records;
}

}  // namespace netvmo
