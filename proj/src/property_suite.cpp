#include "netvmo/property_suite.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "netvmo/camera.hpp"
#include "netvmo/comm_graph.hpp"
#include "netvmo/error.hpp"
#include "netvmo/oracles.hpp"
#include "netvmo/se3.hpp"

namespace netvmo {

namespace {

using oracles::Rng;

CheckResult trace_inequality_sweep(Rng& rng, std::size_t trials, bool corrupt) {
  CheckResult out{"trace inequality on random rotation triples", trials, 0, 0.0,
                  "slack >= -1e-9"};
  for (std::size_t k = 0; k < trials; ++k) {
    const auto r1 = oracles::random_rotation(rng);
    const auto r2 = oracles::random_rotation(rng);
    const auto r3 = oracles::random_rotation(rng);
    TraceInequality t = check_trace_inequality(r1, r2, r3);
    if (corrupt) {
      t.slack = -t.slack;
      t.holds = t.slack >= -kAlgebraicTolerance;
    }
    out.worst = k == 0 ? t.slack : std::min(out.worst, t.slack);
    if (!t.holds) ++out.failures;
  }
  return out;
}

CheckResult exp_log_round_trip(Rng& rng, std::size_t trials) {
  CheckResult out{"exp/log round trip, |w| < 3", trials, 0, 0.0, "error < 1e-9"};
  for (std::size_t k = 0; k < trials; ++k) {
    const Vec3 w = oracles::random_axis_angle(rng, 3.0);
    const double err = (log_so3(exp_so3(w)) - w).norm();
    out.worst = std::max(out.worst, err);
    if (!(err < kAlgebraicTolerance)) ++out.failures;
  }
  return out;
}

CheckResult jacobian_consistency(Rng& rng, std::size_t trials) {
  CheckResult out{"image Jacobian vs central differences", trials, 0, 0.0,
                  "relative error < 1e-5"};
  std::uniform_real_distribution<double> lateral(-0.3, 0.3);
  std::uniform_real_distribution<double> depth(1.0, 3.0);
  std::uniform_real_distribution<double> focal(0.01, 0.05);
  std::uniform_real_distribution<double> spread(-0.15, 0.15);
  for (std::size_t k = 0; k < trials; ++k) {
    const CameraIntrinsics intr{focal(rng)};
    FeatureModel features;
    for (int l = 0; l < 6; ++l) features.points.push_back({spread(rng), spread(rng), spread(rng)});
    const Pose g_bar{exp_so3(oracles::random_axis_angle(rng, 0.5)),
                     Vec3{lateral(rng), lateral(rng), depth(rng)}};
    const auto analytic = image_jacobian(intr, features, g_bar);
    const auto numeric = oracles::finite_difference_jacobian(intr, features, g_bar, 1e-6);
    const double rel = (analytic - numeric).norm() / analytic.norm();
    out.worst = std::max(out.worst, rel);
    if (!(rel < 1e-5)) ++out.failures;
  }
  return out;
}

CheckResult mean_vs_gradient_descent(Rng& rng, std::size_t trials) {
  CheckResult out{"chordal mean vs gradient descent (20 starts)", trials, 0, 0.0,
                  "||R_svd - R_gd||_F < 1e-6"};
  for (std::size_t k = 0; k < trials; ++k) {
    std::vector<Rotation> rotations;
    for (int j = 0; j < 3; ++j) rotations.push_back(exp_so3(oracles::random_axis_angle(rng, 1.5)));
    const Rotation closed_form = chordal_mean(rotations);
    const Rotation descent = oracles::gradient_descent_rotation_mean(rotations, 20, rng);
    const double gap = (closed_form.matrix() - descent.matrix()).norm();
    out.worst = std::max(out.worst, gap);
    if (!(gap < 1e-6)) ++out.failures;
  }
  return out;
}

CheckResult tree_cost_cross_check(Rng& rng, std::size_t trials) {
  CheckResult out{"minimum tree cost vs naive enumeration, n <= 6", trials, 0, 0.0,
                  "exact match"};
  std::uniform_int_distribution<std::size_t> size(2, 6);
  std::uniform_real_distribution<double> density(0.3, 0.9);
  for (std::size_t k = 0; k < trials; ++k) {
    const CommGraph g = oracles::random_connected_graph(size(rng), density(rng), rng);
    const auto fast = min_spanning_tree_cost(g).value;
    const auto naive = oracles::naive_min_tree_cost(g);
    const double gap = std::abs(static_cast<double>(fast) - static_cast<double>(naive));
    out.worst = std::max(out.worst, gap);
    if (fast != naive) ++out.failures;
  }
  return out;
}

CheckResult tree_count_cross_check(Rng& rng, std::size_t trials) {
  CheckResult out{"spanning-tree count vs Kirchhoff determinant, n <= 7", trials, 0, 0.0,
                  "exact match"};
  std::uniform_int_distribution<std::size_t> size(2, 7);
  std::uniform_real_distribution<double> density(0.3, 0.9);
  for (std::size_t k = 0; k < trials; ++k) {
    const CommGraph g = oracles::random_connected_graph(size(rng), density(rng), rng);
    std::size_t count = 0;
    for_each_spanning_tree(g, [&count](const std::vector<Edge>&) { ++count; });
    const auto expected = oracles::kirchhoff_tree_count(g);
    const double gap = std::abs(static_cast<double>(count) - static_cast<double>(expected));
    out.worst = std::max(out.worst, gap);
    if (count != expected) ++out.failures;
  }
  return out;
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed(); });
}

std::string SuiteReport::format() const {
  std::string out;
  for (const auto& c : checks) {
    out += fmt::format("[{}] {}: {} trials, {} failures, worst {:.3g} ({})\n",
                       c.passed() ? "PASS" : "FAIL", c.name, c.trials, c.failures, c.worst,
                       c.criterion);
  }
  if (vacuous) out += "warning: zero trials requested, every check passes vacuously\n";
  out += passed() ? "property suite: PASS\n" : "property suite: FAIL\n";
  return out;
}

SuiteReport run_property_suite(const SuiteOptions& options) {
  Rng rng(options.seed);
  const std::size_t n = options.trials;
  SuiteReport report;
  report.vacuous = n == 0;
  report.checks.push_back(trace_inequality_sweep(rng, n, options.corrupt_trace_inequality));
  report.checks.push_back(exp_log_round_trip(rng, n));
  report.checks.push_back(jacobian_consistency(rng, std::min<std::size_t>(n, 100)));
  report.checks.push_back(mean_vs_gradient_descent(rng, std::min<std::size_t>(n, 20)));
  report.checks.push_back(tree_cost_cross_check(rng, std::min<std::size_t>(n, 50)));
  report.checks.push_back(tree_count_cross_check(rng, std::min<std::size_t>(n, 50)));
  return report;
}

}  // namespace netvmo
