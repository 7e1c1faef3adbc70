#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "netvmo/observer.hpp"
#include "netvmo/se3.hpp"

namespace netvmo {

/// Average pose of the viewing cameras' targets and the constants that
/// measure how far apart those targets are.
struct AveragingBaseline {
  Pose average;                        // g*, world frame
  std::vector<Pose> average_in_camera; // g*_i = g_wi^-1 g*
  std::vector<std::size_t> viewing;    // indices of viewing cameras
  std::size_t camera_count = 0;

  double rho_p = 0.0;  // sum over viewing i of ||p_io_i - p*_i||^2
  double rho_R = 0.0;  // sum over viewing i of rotation_distance(R*_i^T R_io_i)
  double phi_m = 0.0;  // max over viewing i of the same
  double zeta = 0.0;   // invariant-set threshold, > phi_m
  double beta = 0.0;   // 1 - sqrt(2 zeta)

  /// At least two viewing cameras and a pair whose positions and
  /// orientations both differ.
  bool targets_distinct = false;
  /// sym(R*_i^T R_io_i) positive definite for every viewing camera.
  bool targets_in_positive_cone = false;

  bool beta_positive() const { return beta > 0.0; }
};

inline constexpr double kDefaultZetaMargin = 0.1;
inline constexpr double kZetaFloor = 1e-6;

/// Throws kNoBaseline when no camera views the target. zeta is
/// phi_m * (1 + zeta_margin), or kZetaFloor when phi_m is zero.
AveragingBaseline make_baseline(const Network& network,
                                double zeta_margin = kDefaultZetaMargin);
/// Same, with an explicit zeta.
AveragingBaseline make_baseline_with_zeta(const Network& network, double zeta);

/// 1/2 sum_i ||p_bar_i - p*_i||^2
double position_energy(const ObserverState& state, const AveragingBaseline& baseline);

/// sum_i rotation_distance(R*_i^T R_bar_i), evaluated in camera frames.
double orientation_energy(const ObserverState& state, const AveragingBaseline& baseline);

/// The same sum evaluated in the world frame with R_bar_w,i = R_wi R_bar_i.
double orientation_energy_world(const Network& network, const ObserverState& state,
                                const AveragingBaseline& baseline);

/// rotation_distance(R*_i^T R_bar_i) per camera.
std::vector<double> orientation_errors(const ObserverState& state,
                                       const AveragingBaseline& baseline);

struct OmegaMembership {
  bool position = false;
  bool orientation = false;
};

/// Strict-inequality membership in the epsilon-level error sets:
///   (1/n) sum ||p_bar_i - p*_i||^2 < epsilon rho_p / |V_f|, and the
///   orientation analogue with rho_R.
OmegaMembership omega_membership(const ObserverState& state,
                                 const AveragingBaseline& baseline, double epsilon);

struct AttainedEpsilon {
  double position = 0.0;
  double orientation = 0.0;
};

/// Infimum epsilon for which the state belongs to each error set. +inf when
/// the corresponding rho is zero and the error is not.
AttainedEpsilon attained_epsilon(const ObserverState& state,
                                 const AveragingBaseline& baseline);

/// Records with t >= t_first + (1 - tail_fraction)(t_last - t_first).
std::span<const ObserverState> tail(std::span<const ObserverState> series,
                                    double tail_fraction);

/// Largest attained epsilon over the tail of the run.
AttainedEpsilon attained_epsilon_over_tail(std::span<const ObserverState> series,
                                           const AveragingBaseline& baseline,
                                           double tail_fraction);

/// Finite-horizon check of epsilon-level averaging: membership at every
/// recorded step in the tail.
OmegaMembership epsilon_level_achieved(std::span<const ObserverState> series,
                                       const AveragingBaseline& baseline, double epsilon,
                                       double tail_fraction);

struct SetMembership {
  std::vector<bool> per_camera;
  bool all = false;
};

/// Positivity of sym(R_bar_i^T R*_i) for each camera.
SetMembership set_S_membership(const ObserverState& state,
                               const AveragingBaseline& baseline);

/// In S with every orientation error at or below zeta.
bool in_invariant_level_set(const ObserverState& state, const AveragingBaseline& baseline,
                            double zeta);

/// lambda_min(sym(R*^T R_bar_w,i)), the local convexity certificate of camera i.
double sigma(const Network& network, const ObserverState& state,
             const AveragingBaseline& baseline, std::size_t i);

/// Cameras whose orientation error is at or above zeta.
std::vector<std::size_t> lambda_set(const ObserverState& state,
                                    const AveragingBaseline& baseline, double zeta);

/// Guarantee-level constants. Each bound is NaN when its hypotheses fail.
struct TheoryConstants {
  double k = 0.0;                // k_e / k_s
  double epsilon = 0.0;
  double epsilon_R = 0.0;        // 1 - (1 - epsilon) beta
  double epsilon_R_prime = 0.0;  // 1 - (1 - epsilon)(sqrt(beta) - sqrt(k W))^2
  double alpha_R = 0.0;          // k rho_R diam / (2 beta)
  bool applicable = false;       // beta > 0 and k W < beta
};

TheoryConstants theory_constants(const AveragingBaseline& baseline, const Gains& gains,
                                 double epsilon, std::size_t tree_cost_bound,
                                 std::size_t diameter);

/// Per-record quantities written to the time series.
struct StepMetrics {
  double position_energy = 0.0;
  double orientation_energy = 0.0;
  double max_orientation_error = 0.0;
  std::size_t lambda_size = 0;
  bool in_S = false;
  bool in_level_set = false;
};

StepMetrics step_metrics(const ObserverState& state, const AveragingBaseline& baseline);

struct PerformanceReport {
  std::vector<StepMetrics> steps;
  AttainedEpsilon attained;      // over the tail
  OmegaMembership epsilon_level; // at the configured epsilon
  double settled_position_energy = 0.0;    // tail mean
  double settled_orientation_energy = 0.0; // tail mean
  /// Records at which the zeta level set was left after first being entered.
  std::size_t level_set_violations = 0;
  /// Index of the first record inside the zeta level set, or steps.size().
  std::size_t level_set_entry = 0;
};

PerformanceReport evaluate_run(std::span<const ObserverState> series,
                               const AveragingBaseline& baseline, double epsilon,
                               double tail_fraction);

}  // namespace netvmo
