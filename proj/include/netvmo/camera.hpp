#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "netvmo/se3.hpp"

namespace netvmo {

inline constexpr double kDefaultMinDepth = 1e-6;
inline constexpr double kPseudoInverseCutoff = 1e-8;

/// Pinhole camera. Image coordinates are metric, on the sensor plane.
struct CameraIntrinsics {
  double focal_length = 0.03;  // m, > 0
  double min_depth = kDefaultMinDepth;

  bool operator==(const CameraIntrinsics&) const = default;
};

/// Known feature points in the object frame. At least four are needed to
/// recover all six error coordinates.
struct FeatureModel {
  std::vector<Vec3> points;

  std::size_t size() const { return points.size(); }

  /// Regular tetrahedron with the given edge length, centred on the origin.
  static FeatureModel tetrahedron(double edge = 0.2);
};

/// Stacked image coordinates [f_1; ...; f_m], length 2m.
using VisualMeasurement = Eigen::VectorXd;
using ImageJacobian = Eigen::Matrix<double, Eigen::Dynamic, 6>;

/// (lambda / z) [x, y]. Throws kBehindCamera when z <= min_depth.
Eigen::Vector2d project(const CameraIntrinsics& intrinsics, const Vec3& point);

/// Projects every feature transformed by the camera-to-object pose.
VisualMeasurement measure(const CameraIntrinsics& intrinsics,
                          const FeatureModel& features, const Pose& camera_to_object);

/// Sensitivity of measure(g_bar * pose_from_error(e)) to e at e = 0.
ImageJacobian image_jacobian(const CameraIntrinsics& intrinsics,
                             const FeatureModel& features, const Pose& g_bar);

/// Least-squares estimate of pose_error(g_bar^-1 g) from the measurement of
/// the true pose g, via the pseudo-inverse of the image Jacobian at g_bar.
/// Throws kDegenerateFeatureGeometry when the Jacobian has rank < 6.
ErrorVector reconstruct_error(const CameraIntrinsics& intrinsics,
                              const FeatureModel& features, const Pose& g_bar,
                              const VisualMeasurement& measured);

}  // namespace netvmo
