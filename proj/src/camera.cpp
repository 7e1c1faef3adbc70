#include "netvmo/camera.hpp"

#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "netvmo/error.hpp"

namespace netvmo {

FeatureModel FeatureModel::tetrahedron(double edge) {
  // Vertices of a regular tetrahedron inscribed in the cube [-1, 1]^3 have
  // edge length 2 * sqrt(2).
  const double s = edge / (2.0 * std::sqrt(2.0));
  return {{Vec3{s, s, s}, Vec3{s, -s, -s}, Vec3{-s, s, -s}, Vec3{-s, -s, s}}};
}

Eigen::Vector2d project(const CameraIntrinsics& intrinsics, const Vec3& point) {
  if (!(point.z() > intrinsics.min_depth)) {
    throw Error(ErrorCode::kBehindCamera,
                "point at depth " + std::to_string(point.z()) +
                    " is not in front of the camera");
  }
  return (intrinsics.focal_length / point.z()) * point.head<2>();
}

namespace {

Eigen::Vector2d project_feature(const CameraIntrinsics& intrinsics,
                                const Vec3& point, std::size_t index) {
  try {
    return project(intrinsics, point);
  } catch (const Error& e) {
    throw Error(e.code(), "feature " + std::to_string(index) + ": " + e.what());
  }
}

}  // namespace

VisualMeasurement measure(const CameraIntrinsics& intrinsics,
                          const FeatureModel& features, const Pose& camera_to_object) {
  VisualMeasurement f(2 * features.size());
  for (std::size_t l = 0; l < features.size(); ++l) {
    f.segment<2>(2 * l) =
        project_feature(intrinsics, camera_to_object * features.points[l], l);
  }
  return f;
}

ImageJacobian image_jacobian(const CameraIntrinsics& intrinsics,
                             const FeatureModel& features, const Pose& g_bar) {
  // q(e) = R_bar (R(e) p_l + e_p) + p_bar with R(e) = I + hat(e_r) + O(e^2),
  // so dq/de = R_bar [I, -hat(p_l)].
  const Mat3& rot = g_bar.rotation.matrix();
  ImageJacobian jac(2 * features.size(), 6);
  for (std::size_t l = 0; l < features.size(); ++l) {
    const Vec3& p = features.points[l];
    const Vec3 q = g_bar * p;
    if (!(q.z() > intrinsics.min_depth)) {
      throw Error(ErrorCode::kBehindCamera,
                  "feature " + std::to_string(l) + " is not in front of the camera");
    }
    const double z = q.z();
    const double lz = intrinsics.focal_length / z;
    Eigen::Matrix<double, 2, 3> dproj;
    dproj << lz, 0.0, -lz * q.x() / z,
             0.0, lz, -lz * q.y() / z;
    Eigen::Matrix<double, 3, 6> dq;
    dq << rot, -rot * hat(p);
    jac.middleRows<2>(2 * l) = dproj * dq;
  }
  return jac;
}

ErrorVector reconstruct_error(const CameraIntrinsics& intrinsics,
                              const FeatureModel& features, const Pose& g_bar,
                              const VisualMeasurement& measured) {
  if (measured.size() != static_cast<Eigen::Index>(2 * features.size())) {
    throw Error(ErrorCode::kInvalidArgument, "measurement length does not match features");
  }
  const ImageJacobian jac = image_jacobian(intrinsics, features, g_bar);
  const VisualMeasurement residual = measured - measure(intrinsics, features, g_bar);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  if (sigma.size() < 6 || sigma(5) < kPseudoInverseCutoff * sigma(0)) {
    throw Error(ErrorCode::kDegenerateFeatureGeometry,
                "image Jacobian has rank < 6 for this feature geometry");
  }
  const Eigen::VectorXd coeffs =
      (svd.matrixU().transpose() * residual).cwiseQuotient(sigma);
  return svd.matrixV() * coeffs;
}

}  // namespace netvmo
