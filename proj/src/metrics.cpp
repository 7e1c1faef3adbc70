#include "netvmo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "netvmo/error.hpp"

namespace netvmo {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Pose of camera i's fictitious target in camera i's frame.
Pose camera_to_target(const Network& network, std::size_t i) {
  return relative_pose(network.cameras()[i].world_pose, network.targets()[i]->world_pose);
}

// Infimum epsilon with mean_error < epsilon * rho / |V_f|.
double infimum_epsilon(double mean_error, double rho, std::size_t viewing) {
  if (rho > 0.0) return mean_error * static_cast<double>(viewing) / rho;
  return mean_error == 0.0 ? 0.0 : kInf;
}

}  // namespace

AveragingBaseline make_baseline_with_zeta(const Network& network, double zeta) {
  AveragingBaseline b;
  b.viewing = network.viewing_cameras();
  b.camera_count = network.size();
  if (b.viewing.empty()) {
    throw Error(ErrorCode::kNoBaseline, "no camera views the target");
  }
  std::vector<Pose> target_poses;
  for (std::size_t i : b.viewing) target_poses.push_back(network.targets()[i]->world_pose);
  b.average = mean_pose(target_poses);
  for (const auto& camera : network.cameras()) {
    b.average_in_camera.push_back(relative_pose(camera.world_pose, b.average));
  }

  b.targets_in_positive_cone = true;
  for (std::size_t i : b.viewing) {
    const Pose target = camera_to_target(network, i);
    const Pose& avg = b.average_in_camera[i];
    b.rho_p += (target.position - avg.position).squaredNorm();
    const Rotation offset = avg.rotation.inverse() * target.rotation;
    const double d = rotation_distance(offset);
    b.rho_R += d;
    b.phi_m = std::max(b.phi_m, d);
    if (!(min_sym_eigenvalue(offset.matrix()) > 0.0)) b.targets_in_positive_cone = false;
  }

  for (std::size_t a = 0; a < target_poses.size() && !b.targets_distinct; ++a) {
    for (std::size_t c = a + 1; c < target_poses.size(); ++c) {
      if (target_poses[a].position != target_poses[c].position &&
          !(target_poses[a].rotation == target_poses[c].rotation)) {
        b.targets_distinct = true;
        break;
      }
    }
  }

  if (!(zeta > b.phi_m)) {
    throw Error(ErrorCode::kInvalidArgument, "zeta must exceed phi_m");
  }
  b.zeta = zeta;
  b.beta = 1.0 - std::sqrt(2.0 * zeta);
  return b;
}

AveragingBaseline make_baseline(const Network& network, double zeta_margin) {
  if (!(zeta_margin > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "zeta margin must be positive");
  }
  // phi_m is needed before zeta; the first pass uses an admissible zeta.
  AveragingBaseline probe = make_baseline_with_zeta(network, kInf);
  const double zeta = probe.phi_m > 0.0 ? probe.phi_m * (1.0 + zeta_margin) : kZetaFloor;
  probe.zeta = zeta;
  probe.beta = 1.0 - std::sqrt(2.0 * zeta);
  return probe;
}

double position_energy(const ObserverState& state, const AveragingBaseline& baseline) {
  double sum = 0.0;
  for (std::size_t i = 0; i < state.estimates.size(); ++i) {
    sum += (state.estimates[i].position - baseline.average_in_camera[i].position).squaredNorm();
  }
  return 0.5 * sum;
}

std::vector<double> orientation_errors(const ObserverState& state,
                                       const AveragingBaseline& baseline) {
  std::vector<double> out;
  out.reserve(state.estimates.size());
  for (std::size_t i = 0; i < state.estimates.size(); ++i) {
    out.push_back(rotation_distance(baseline.average_in_camera[i].rotation.inverse() *
                                    state.estimates[i].rotation));
  }
  return out;
}

double orientation_energy(const ObserverState& state, const AveragingBaseline& baseline) {
  const auto errors = orientation_errors(state, baseline);
  double sum = 0.0;
  for (double e : errors) sum += e;
  return sum;
}

double orientation_energy_world(const Network& network, const ObserverState& state,
                                const AveragingBaseline& baseline) {
  const Rotation average_inv = baseline.average.rotation.inverse();
  double sum = 0.0;
  for (std::size_t i = 0; i < state.estimates.size(); ++i) {
    const Rotation world = network.cameras()[i].world_pose.rotation * state.estimates[i].rotation;
    sum += rotation_distance(average_inv * world);
  }
  return sum;
}

AttainedEpsilon attained_epsilon(const ObserverState& state,
                                 const AveragingBaseline& baseline) {
  const double n = static_cast<double>(state.estimates.size());
  const double mean_p = 2.0 * position_energy(state, baseline) / n;
  const double mean_r = orientation_energy(state, baseline) / n;
  return {infimum_epsilon(mean_p, baseline.rho_p, baseline.viewing.size()),
          infimum_epsilon(mean_r, baseline.rho_R, baseline.viewing.size())};
}

OmegaMembership omega_membership(const ObserverState& state,
                                 const AveragingBaseline& baseline, double epsilon) {
  const double n = static_cast<double>(state.estimates.size());
  const double vf = static_cast<double>(baseline.viewing.size());
  const double mean_p = 2.0 * position_energy(state, baseline) / n;
  const double mean_r = orientation_energy(state, baseline) / n;
  return {mean_p < epsilon * baseline.rho_p / vf, mean_r < epsilon * baseline.rho_R / vf};
}

std::span<const ObserverState> tail(std::span<const ObserverState> series,
                                    double tail_fraction) {
  if (series.empty()) return series;
  const double t_first = series.front().t;
  const double t_last = series.back().t;
  const double start = t_first + (1.0 - tail_fraction) * (t_last - t_first);
  auto it = std::find_if(series.begin(), series.end(),
                         [start](const ObserverState& s) { return s.t >= start; });
  return series.subspan(static_cast<std::size_t>(it - series.begin()));
}

AttainedEpsilon attained_epsilon_over_tail(std::span<const ObserverState> series,
                                           const AveragingBaseline& baseline,
                                           double tail_fraction) {
  AttainedEpsilon worst;
  for (const auto& state : tail(series, tail_fraction)) {
    const AttainedEpsilon e = attained_epsilon(state, baseline);
    worst.position = std::max(worst.position, e.position);
    worst.orientation = std::max(worst.orientation, e.orientation);
  }
  return worst;
}

OmegaMembership epsilon_level_achieved(std::span<const ObserverState> series,
                                       const AveragingBaseline& baseline, double epsilon,
                                       double tail_fraction) {
  const auto window = tail(series, tail_fraction);
  OmegaMembership out{!window.empty(), !window.empty()};
  for (const auto& state : window) {
    const OmegaMembership m = omega_membership(state, baseline, epsilon);
    out.position = out.position && m.position;
    out.orientation = out.orientation && m.orientation;
  }
  return out;
}

SetMembership set_S_membership(const ObserverState& state,
                               const AveragingBaseline& baseline) {
  SetMembership out;
  out.all = true;
  for (std::size_t i = 0; i < state.estimates.size(); ++i) {
    const Mat3 m = state.estimates[i].rotation.matrix().transpose() *
                   baseline.average_in_camera[i].rotation.matrix();
    const bool member = min_sym_eigenvalue(m) > 0.0;
    out.per_camera.push_back(member);
    out.all = out.all && member;
  }
  return out;
}

bool in_invariant_level_set(const ObserverState& state, const AveragingBaseline& baseline,
                            double zeta) {
  if (!set_S_membership(state, baseline).all) return false;
  const auto errors = orientation_errors(state, baseline);
  return std::all_of(errors.begin(), errors.end(), [zeta](double e) { return e <= zeta; });
}

double sigma(const Network& network, const ObserverState& state,
             const AveragingBaseline& baseline, std::size_t i) {
  const Mat3 world = network.cameras().at(i).world_pose.rotation.matrix() *
                     state.estimates.at(i).rotation.matrix();
  return min_sym_eigenvalue(baseline.average.rotation.matrix().transpose() * world);
}

std::vector<std::size_t> lambda_set(const ObserverState& state,
                                    const AveragingBaseline& baseline, double zeta) {
  const auto errors = orientation_errors(state, baseline);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (errors[i] >= zeta) out.push_back(i);
  }
  return out;
}

TheoryConstants theory_constants(const AveragingBaseline& baseline, const Gains& gains,
                                 double epsilon, std::size_t tree_cost_bound,
                                 std::size_t diameter) {
  TheoryConstants c;
  c.k = gains.ratio();
  c.epsilon = epsilon;
  const double beta = baseline.beta;
  const double kw = c.k * static_cast<double>(tree_cost_bound);
  if (beta > 0.0) {
    c.epsilon_R = 1.0 - (1.0 - epsilon) * beta;
    c.alpha_R = c.k * baseline.rho_R * static_cast<double>(diameter) / (2.0 * beta);
  } else {
    c.epsilon_R = kNaN;
    c.alpha_R = kNaN;
  }
  c.applicable = beta > 0.0 && std::isfinite(kw) && kw < beta;
  if (c.applicable) {
    const double gap = std::sqrt(beta) - std::sqrt(kw);
    c.epsilon_R_prime = 1.0 - (1.0 - epsilon) * gap * gap;
  } else {
    c.epsilon_R_prime = kNaN;
  }
  return c;
}

StepMetrics step_metrics(const ObserverState& state, const AveragingBaseline& baseline) {
  StepMetrics m;
  const auto errors = orientation_errors(state, baseline);
  m.position_energy = position_energy(state, baseline);
  for (double e : errors) {
    m.orientation_energy += e;
    m.max_orientation_error = std::max(m.max_orientation_error, e);
    if (e >= baseline.zeta) ++m.lambda_size;
  }
  m.in_S = set_S_membership(state, baseline).all;
  m.in_level_set = m.in_S && m.max_orientation_error <= baseline.zeta;
  return m;
}

PerformanceReport evaluate_run(std::span<const ObserverState> series,
                               const AveragingBaseline& baseline, double epsilon,
                               double tail_fraction) {
  PerformanceReport report;
  for (const auto& state : series) report.steps.push_back(step_metrics(state, baseline));

  report.attained = attained_epsilon_over_tail(series, baseline, tail_fraction);
  report.epsilon_level = epsilon_level_achieved(series, baseline, epsilon, tail_fraction);

  const auto window = tail(series, tail_fraction);
  const std::size_t offset = series.size() - window.size();
  for (std::size_t k = offset; k < series.size(); ++k) {
    report.settled_position_energy += report.steps[k].position_energy;
    report.settled_orientation_energy += report.steps[k].orientation_energy;
  }
  if (!window.empty()) {
    report.settled_position_energy /= static_cast<double>(window.size());
    report.settled_orientation_energy /= static_cast<double>(window.size());
  }

  report.level_set_entry = report.steps.size();
  for (std::size_t k = 0; k < report.steps.size(); ++k) {
    if (report.steps[k].in_level_set) {
      if (report.level_set_entry == report.steps.size()) report.level_set_entry = k;
    } else if (report.level_set_entry < report.steps.size()) {
      ++report.level_set_violations;
    }
  }
  return report;
}

}  // namespace netvmo
