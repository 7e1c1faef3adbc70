#pragma once

#include <span>

#include <Eigen/Core>

namespace netvmo {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

// Stacked position error (m) over sine-axis rotation error.
using ErrorVector = Vec6;

inline constexpr double kAlgebraicTolerance = 1e-9;
inline constexpr double kReprojectThreshold = 1e-12;
inline constexpr double kNearPiMargin = 1e-6;

/// Element of SO(3). Every constructor path yields a matrix with
/// orthogonality residual below kAlgebraicTolerance and determinant +1;
/// results whose residual exceeds kReprojectThreshold are projected back
/// onto the group.
class Rotation {
 public:
  Rotation() : matrix_(Mat3::Identity()) {}

  /// Accepts `m` if it is a rotation within kAlgebraicTolerance, otherwise
  /// throws ErrorCode::kInvalidArgument.
  static Rotation from_matrix(const Mat3& m);

  /// Nearest rotation in the Frobenius sense (orthogonal polar factor with
  /// det +1). No validity requirement on `m`.
  static Rotation project(const Mat3& m);

  static double orthogonality_residual(const Mat3& m);

  const Mat3& matrix() const { return matrix_; }
  Rotation inverse() const { return Rotation(matrix_.transpose(), Trusted{}); }

  Rotation operator*(const Rotation& other) const;
  Vec3 operator*(const Vec3& v) const { return matrix_ * v; }

  bool operator==(const Rotation& other) const { return matrix_ == other.matrix_; }

 private:
  struct Trusted {};
  Rotation(const Mat3& m, Trusted) : matrix_(m) {}

  Mat3 matrix_;
};

/// Rigid transform (rotation, position) in SE(3).
struct Pose {
  Rotation rotation;
  Vec3 position = Vec3::Zero();

  static Pose identity() { return {}; }

  Pose inverse() const;
  Pose operator*(const Pose& other) const;
  /// Applies the transform to a point.
  Vec3 operator*(const Vec3& point) const;

  /// 4x4 homogeneous matrix.
  Mat4 matrix() const;

  bool operator==(const Pose& other) const = default;
};

/// Body velocity (v, w).
struct Twist {
  Vec3 linear = Vec3::Zero();
  Vec3 angular = Vec3::Zero();

  static Twist from_vector(const Vec6& v) { return {v.head<3>(), v.tail<3>()}; }
  Vec6 vector() const {
    Vec6 out;
    out << linear, angular;
    return out;
  }

  Twist operator+(const Twist& o) const { return {linear + o.linear, angular + o.angular}; }
  Twist operator*(double s) const { return {linear * s, angular * s}; }

  bool operator==(const Twist& other) const = default;
};

Mat3 hat(const Vec3& v);
/// 4x4 twist matrix [[hat(w), v], [0, 0]].
Mat4 hat(const Twist& twist);

/// Inverse of hat. Throws kSymmetryViolation when ||M + M^T||_F >= 1e-9.
Vec3 vee(const Mat3& m);

/// Rodrigues formula for an axis-angle vector (axis scaled by radians).
Rotation exp_so3(const Vec3& axis_angle);

/// Axis-angle vector with norm in [0, pi). Throws kAngleNearPi when the
/// angle is within kNearPiMargin of pi, where the axis is not unique.
Vec3 log_so3(const Rotation& r);

/// Group exponential of a twist, exp(hat(twist)).
Pose exp_se3(const Twist& twist);

/// (R - R^T) / 2
Mat3 skew_part(const Rotation& r);
/// (M + M^T) / 2
Mat3 sym_part(const Mat3& m);

double min_sym_eigenvalue(const Mat3& m);

/// vee(skew_part(R)) = sin(theta) * axis.
Vec3 rotation_error(const Rotation& r);

/// [position; rotation_error(rotation)]
ErrorVector pose_error(const Pose& g);

/// Right inverse of pose_error on rotations with angle <= pi/2: the pose
/// whose pose_error equals `e`. Requires ||e.tail<3>()|| <= 1.
Pose pose_from_error(const ErrorVector& e);

/// 1/2 ||I - R||_F^2 = tr(I - R) = 2(1 - cos theta), in [0, 4].
double rotation_distance(const Rotation& r);

/// 1/2 ||I - g||_F^2 = 1/2 ||p||^2 + rotation_distance(R).
double pose_distance(const Pose& g);

/// Projection of the arithmetic mean of `rotations` onto SO(3). Throws
/// kDegenerateMean when the projection is not unique.
Rotation chordal_mean(std::span<const Rotation> rotations);

/// argmin_g sum_j pose_distance(g^-1 g_j): arithmetic mean of the positions
/// with the chordal mean of the rotations (the cost separates exactly).
Pose mean_pose(std::span<const Pose> poses);

struct TraceInequality {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // lhs - rhs
  bool holds = true;   // slack >= -kAlgebraicTolerance
};

/// Evaluates, for any R1, R2, R3 in SO(3),
///   1/2 tr(R1^T R2 - R1^T R3 R2^T R3)
///     >= d(R1^T R3) - d(R1^T R2) + lmin(sym(R1^T R3)) d(R3^T R2)
/// with d = rotation_distance.
TraceInequality check_trace_inequality(const Rotation& r1, const Rotation& r2,
                                       const Rotation& r3);

}  // namespace netvmo
