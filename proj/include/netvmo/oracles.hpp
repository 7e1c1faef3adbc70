#pragma once

// Independent reference computations used to cross-check the library:
// brute-force enumerations, finite differences and iterative solvers that
// share no code path with the closed-form implementations they verify.

#include <cstddef>
#include <random>
#include <span>

#include "netvmo/camera.hpp"
#include "netvmo/comm_graph.hpp"
#include "netvmo/se3.hpp"

namespace netvmo::oracles {

using Rng = std::mt19937_64;

/// Haar-uniform rotation from a normalised Gaussian quaternion.
Rotation random_rotation(Rng& rng);
/// Axis-angle vector with uniform direction and norm uniform in [0, max_angle).
Vec3 random_axis_angle(Rng& rng, double max_angle);
Pose random_pose(Rng& rng, double position_scale);

/// Erdos-Renyi graph resampled until connected.
CommGraph random_connected_graph(std::size_t n, double edge_probability, Rng& rng);

/// Number of spanning trees from the determinant of a reduced Laplacian.
std::size_t kirchhoff_tree_count(const CommGraph& graph);

/// Tree cost computed by writing out the root path of every node and
/// counting, per edge, the depths of the paths containing it.
std::size_t explicit_path_tree_cost(const SpanningTree& tree);

/// Minimum tree cost over every (n-1)-edge subset that forms a spanning
/// tree, for every root.
std::size_t naive_min_tree_cost(const CommGraph& graph);

/// Diameter from exhaustive enumeration of simple paths.
std::size_t brute_force_diameter(const CommGraph& graph);

/// Minimiser of sum_j rotation_distance(R^T R_j) by Riemannian gradient
/// descent from `starts` random initial rotations; returns the best result.
Rotation gradient_descent_rotation_mean(std::span<const Rotation> rotations,
                                        std::size_t starts, Rng& rng);

/// Central differences of measure(g_bar * pose_from_error(e)) at e = 0.
ImageJacobian finite_difference_jacobian(const CameraIntrinsics& intrinsics,
                                         const FeatureModel& features, const Pose& g_bar,
                                         double step);

}  // namespace netvmo::oracles
