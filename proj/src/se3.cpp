#include "netvmo/se3.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "netvmo/error.hpp"

namespace netvmo {

namespace {

// U * diag(1, 1, det(U V^T)) * V^T for the SVD of m.
Mat3 polar_rotation(const Eigen::JacobiSVD<Mat3>& svd) {
  const Mat3& u = svd.matrixU();
  const Mat3& v = svd.matrixV();
  Mat3 d = Mat3::Identity();
  d(2, 2) = (u * v.transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  return u * d * v.transpose();
}

}  // namespace

double Rotation::orthogonality_residual(const Mat3& m) {
  return (m.transpose() * m - Mat3::Identity()).norm();
}

Rotation Rotation::from_matrix(const Mat3& m) {
  if (!m.allFinite() || orthogonality_residual(m) > kAlgebraicTolerance ||
      std::abs(m.determinant() - 1.0) > kAlgebraicTolerance) {
    throw Error(ErrorCode::kInvalidArgument, "matrix is not a rotation");
  }
  if (orthogonality_residual(m) > kReprojectThreshold) return project(m);
  return Rotation(m, Trusted{});
}

Rotation Rotation::project(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return Rotation(polar_rotation(svd), Trusted{});
}

Rotation Rotation::operator*(const Rotation& other) const {
  Mat3 product = matrix_ * other.matrix_;
  if (orthogonality_residual(product) > kReprojectThreshold) return project(product);
  return Rotation(product, Trusted{});
}

Pose Pose::inverse() const {
  Rotation rt = rotation.inverse();
  return {rt, -(rt * position)};
}

Pose Pose::operator*(const Pose& other) const {
  return {rotation * other.rotation, rotation * other.position + position};
}

Vec3 Pose::operator*(const Vec3& point) const { return rotation * point + position; }

Mat4 Pose::matrix() const {
  Mat4 g = Mat4::Identity();
  g.topLeftCorner<3, 3>() = rotation.matrix();
  g.topRightCorner<3, 1>() = position;
  return g;
}

Mat3 hat(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

Mat4 hat(const Twist& twist) {
  Mat4 m = Mat4::Zero();
  m.topLeftCorner<3, 3>() = hat(twist.angular);
  m.topRightCorner<3, 1>() = twist.linear;
  return m;
}

Vec3 vee(const Mat3& m) {
  if ((m + m.transpose()).norm() >= kAlgebraicTolerance) {
    throw Error(ErrorCode::kSymmetryViolation, "vee: matrix is not skew-symmetric");
  }
  return {m(2, 1), m(0, 2), m(1, 0)};
}

Rotation exp_so3(const Vec3& axis_angle) {
  const double theta = axis_angle.norm();
  const Mat3 k = hat(axis_angle);
  if (theta < 1e-8) {
    return Rotation::project(Mat3::Identity() + k + 0.5 * k * k);
  }
  const double a = std::sin(theta) / theta;
  const double b = (1.0 - std::cos(theta)) / (theta * theta);
  return Rotation::from_matrix(Mat3::Identity() + a * k + b * k * k);
}

Vec3 log_so3(const Rotation& r) {
  const Mat3& m = r.matrix();
  const Vec3 s{0.5 * (m(2, 1) - m(1, 2)), 0.5 * (m(0, 2) - m(2, 0)),
               0.5 * (m(1, 0) - m(0, 1))};
  const double c = 0.5 * (m.trace() - 1.0);
  const double sin_theta = s.norm();
  const double theta = std::atan2(sin_theta, c);
  if (std::numbers::pi - theta < kNearPiMargin) {
    throw Error(ErrorCode::kAngleNearPi,
                "log_so3: rotation angle within 1e-6 of pi, axis is ambiguous");
  }
  if (sin_theta < 1e-8) {
    // theta / sin(theta) = 1 + theta^2 / 6 + O(theta^4)
    return s * (1.0 + theta * theta / 6.0);
  }
  return s * (theta / sin_theta);
}

Pose exp_se3(const Twist& twist) {
  const Vec3& w = twist.angular;
  const double theta = w.norm();
  const Mat3 k = hat(w);
  Mat3 v;
  if (theta < 1e-8) {
    v = Mat3::Identity() + 0.5 * k + k * k / 6.0;
  } else {
    const double t2 = theta * theta;
    v = Mat3::Identity() + (1.0 - std::cos(theta)) / t2 * k +
        (theta - std::sin(theta)) / (t2 * theta) * k * k;
  }
  return {exp_so3(w), v * twist.linear};
}

Mat3 skew_part(const Rotation& r) {
  return 0.5 * (r.matrix() - r.matrix().transpose());
}

Mat3 sym_part(const Mat3& m) { return 0.5 * (m + m.transpose()); }

double min_sym_eigenvalue(const Mat3& m) {
  Eigen::SelfAdjointEigenSolver<Mat3> solver(sym_part(m), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

Vec3 rotation_error(const Rotation& r) {
  const Mat3& m = r.matrix();
  return {0.5 * (m(2, 1) - m(1, 2)), 0.5 * (m(0, 2) - m(2, 0)),
          0.5 * (m(1, 0) - m(0, 1))};
}

ErrorVector pose_error(const Pose& g) {
  ErrorVector e;
  e << g.position, rotation_error(g.rotation);
  return e;
}

Pose pose_from_error(const ErrorVector& e) {
  const Vec3 r = e.tail<3>();
  const double s = r.norm();
  if (s > 1.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "pose_from_error: rotation error norm exceeds 1");
  }
  Vec3 axis_angle = Vec3::Zero();
  if (s > 0.0) axis_angle = r * (std::asin(s) / s);
  return {exp_so3(axis_angle), e.head<3>()};
}

double rotation_distance(const Rotation& r) { return 3.0 - r.matrix().trace(); }

double pose_distance(const Pose& g) {
  return 0.5 * g.position.squaredNorm() + rotation_distance(g.rotation);
}

Rotation chordal_mean(std::span<const Rotation> rotations) {
  if (rotations.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "chordal_mean: empty input");
  }
  Mat3 sum = Mat3::Zero();
  for (const auto& r : rotations) sum += r.matrix();
  const Mat3 mean = sum / static_cast<double>(rotations.size());

  Eigen::JacobiSVD<Mat3> svd(mean, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3 sigma = svd.singularValues();  // descending
  const double tol = 1e-9 * std::max(1.0, sigma(0));
  const bool flipped =
      (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0;
  // The polar factor is unique iff rank >= 2, and with a reflection also
  // needs sigma_2 > sigma_3.
  if (sigma(1) <= tol || (flipped && sigma(1) - sigma(2) <= tol)) {
    throw Error(ErrorCode::kDegenerateMean,
                "chordal_mean: mean rotation matrix is rank-deficient");
  }
  return Rotation::project(polar_rotation(svd));
}

Pose mean_pose(std::span<const Pose> poses) {
  if (poses.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "mean_pose: empty input");
  }
  std::vector<Rotation> rotations;
  rotations.reserve(poses.size());
  Vec3 position = Vec3::Zero();
  for (const auto& g : poses) {
    rotations.push_back(g.rotation);
    position += g.position;
  }
  position /= static_cast<double>(poses.size());
  return {chordal_mean(rotations), position};
}

TraceInequality check_trace_inequality(const Rotation& r1, const Rotation& r2,
                                       const Rotation& r3) {
  const Mat3& a = r1.matrix();
  const Mat3& b = r2.matrix();
  const Mat3& c = r3.matrix();
  TraceInequality out;
  out.lhs = 0.5 * (a.transpose() * b - a.transpose() * c * b.transpose() * c).trace();
  const Rotation r13 = r1.inverse() * r3;
  out.rhs = rotation_distance(r13) - rotation_distance(r1.inverse() * r2) +
            min_sym_eigenvalue(r13.matrix()) * rotation_distance(r3.inverse() * r2);
  out.slack = out.lhs - out.rhs;
  out.holds = out.slack >= -kAlgebraicTolerance;
  return out;
}

}  // namespace netvmo
