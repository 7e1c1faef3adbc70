#include "netvmo/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Geometry>
#include <Eigen/LU>

namespace netvmo::oracles {

Rotation random_rotation(Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::Quaterniond q(normal(rng), normal(rng), normal(rng), normal(rng));
  q.normalize();
  return Rotation::project(q.toRotationMatrix());
}

Vec3 random_axis_angle(Rng& rng, double max_angle) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(0.0, max_angle);
  Vec3 axis{normal(rng), normal(rng), normal(rng)};
  while (axis.norm() < 1e-12) axis = {normal(rng), normal(rng), normal(rng)};
  return axis.normalized() * uniform(rng);
}

Pose random_pose(Rng& rng, double position_scale) {
  std::uniform_real_distribution<double> uniform(-position_scale, position_scale);
  return {random_rotation(rng), Vec3{uniform(rng), uniform(rng), uniform(rng)}};
}

CommGraph random_connected_graph(std::size_t n, double edge_probability, Rng& rng) {
  std::bernoulli_distribution coin(edge_probability);
  while (true) {
    std::vector<Edge> edges;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        if (coin(rng)) edges.emplace_back(a, b);
      }
    }
    CommGraph g(n, edges);
    if (g.is_connected()) return g;
  }
}

std::size_t kirchhoff_tree_count(const CommGraph& graph) {
  const auto n = static_cast<Eigen::Index>(graph.size());
  if (n <= 1) return n == 1 ? 1 : 0;
  Eigen::MatrixXd laplacian = Eigen::MatrixXd::Zero(n, n);
  for (auto [a, b] : graph.edges()) {
    const auto i = static_cast<Eigen::Index>(a);
    const auto j = static_cast<Eigen::Index>(b);
    laplacian(i, i) += 1.0;
    laplacian(j, j) += 1.0;
    laplacian(i, j) -= 1.0;
    laplacian(j, i) -= 1.0;
  }
  const double det = laplacian.bottomRightCorner(n - 1, n - 1).determinant();
  return static_cast<std::size_t>(std::llround(det));
}

std::size_t explicit_path_tree_cost(const SpanningTree& tree) {
  const std::size_t n = tree.size();
  // Root path of every node as a list of (parent, child) edges.
  std::vector<std::vector<Edge>> paths(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t v = i;
    while (v != tree.root) {
      paths[i].emplace_back(tree.parent[v], v);
      v = tree.parent[v];
    }
  }
  std::size_t best = 0;
  for (std::size_t child = 0; child < n; ++child) {
    if (child == tree.root) continue;
    const Edge e{tree.parent[child], child};
    std::size_t load = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::find(paths[i].begin(), paths[i].end(), e) != paths[i].end()) {
        load += paths[i].size();
      }
    }
    best = std::max(best, load);
  }
  return best;
}

namespace {

bool is_spanning_tree(std::size_t n, const std::vector<Edge>& edges) {
  if (edges.size() + 1 != n) return false;
  return CommGraph(n, edges).is_connected();
}

SpanningTree root_tree(std::size_t n, const std::vector<Edge>& edges, std::size_t root) {
  SpanningTree t{root, std::vector<std::size_t>(n, n)};
  t.parent[root] = root;
  std::vector<std::size_t> stack{root};
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (auto [a, b] : edges) {
      const std::size_t other = a == u ? b : (b == u ? a : n);
      if (other != n && t.parent[other] == n) {
        t.parent[other] = u;
        stack.push_back(other);
      }
    }
  }
  return t;
}

}  // namespace

std::size_t naive_min_tree_cost(const CommGraph& graph) {
  const std::size_t n = graph.size();
  const auto& all = graph.edges();
  const std::size_t m = all.size();
  std::size_t best = std::numeric_limits<std::size_t>::max();
  if (n == 1) return 0;
  // Subsets of exactly n - 1 edges via a selection mask.
  std::vector<bool> mask(m, false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(std::min(m, n - 1)), true);
  if (m < n - 1) return best;
  do {
    std::vector<Edge> chosen;
    for (std::size_t k = 0; k < m; ++k) {
      if (mask[k]) chosen.push_back(all[k]);
    }
    if (!is_spanning_tree(n, chosen)) continue;
    for (std::size_t root = 0; root < n; ++root) {
      best = std::min(best, explicit_path_tree_cost(root_tree(n, chosen, root)));
    }
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

std::size_t brute_force_diameter(const CommGraph& graph) {
  const std::size_t n = graph.size();
  const std::size_t unreachable = std::numeric_limits<std::size_t>::max();
  std::vector<std::vector<std::size_t>> shortest(n, std::vector<std::size_t>(n, unreachable));
  std::vector<bool> on_path(n, false);
  std::function<void(std::size_t, std::size_t, std::size_t)> walk =
      [&](std::size_t source, std::size_t u, std::size_t length) {
        shortest[source][u] = std::min(shortest[source][u], length);
        on_path[u] = true;
        for (std::size_t v = 0; v < n; ++v) {
          if (!on_path[v] && graph.has_edge(u, v)) walk(source, v, length + 1);
        }
        on_path[u] = false;
      };
  for (std::size_t s = 0; s < n; ++s) walk(s, s, 0);
  std::size_t diameter = 0;
  for (const auto& row : shortest) {
    for (std::size_t d : row) diameter = std::max(diameter, d);
  }
  return diameter;
}

Rotation gradient_descent_rotation_mean(std::span<const Rotation> rotations,
                                        std::size_t starts, Rng& rng) {
  Mat3 m = Mat3::Zero();
  for (const auto& r : rotations) m += r.matrix();
  m /= static_cast<double>(rotations.size());
  // cost(R) = 3 - tr(R^T M) per rotation; its descent direction in the body
  // frame is vee(skew(R^T M)).
  const auto cost = [&](const Rotation& r) { return 3.0 - (r.matrix().transpose() * m).trace(); };
  Rotation best;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < starts; ++s) {
    Rotation r = random_rotation(rng);
    for (int iter = 0; iter < 20000; ++iter) {
      const Mat3 a = r.matrix().transpose() * m;
      const Vec3 g{0.5 * (a(2, 1) - a(1, 2)), 0.5 * (a(0, 2) - a(2, 0)),
                   0.5 * (a(1, 0) - a(0, 1))};
      if (g.norm() < 1e-14) break;
      r = r * exp_so3(0.5 * g);
    }
    if (const double c = cost(r); c < best_cost) {
      best_cost = c;
      best = r;
    }
  }
  return best;
}

ImageJacobian finite_difference_jacobian(const CameraIntrinsics& intrinsics,
                                         const FeatureModel& features, const Pose& g_bar,
                                         double step) {
  ImageJacobian jac(2 * features.size(), 6);
  for (int k = 0; k < 6; ++k) {
    ErrorVector e = ErrorVector::Zero();
    e(k) = step;
    const auto plus = measure(intrinsics, features, g_bar * pose_from_error(e));
    const auto minus = measure(intrinsics, features, g_bar * pose_from_error(-e));
    jac.col(k) = (plus - minus) / (2.0 * step);
  }
  return jac;
}

}  // namespace netvmo::oracles
