#include <gtest/gtest.h>

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "netvmo/error.hpp"
#include "netvmo/oracles.hpp"
#include "netvmo/se3.hpp"

namespace netvmo {
namespace {

constexpr double kPi = std::numbers::pi;

Mat3 rot_z(double angle) {
  Mat3 m;
  m << std::cos(angle), -std::sin(angle), 0, std::sin(angle), std::cos(angle), 0, 0, 0, 1;
  return m;
}

TEST(Hat, ZeroAndUnitZ) {
  EXPECT_EQ(hat(Vec3::Zero()), Mat3::Zero());
  Mat3 expected;
  expected << 0, -1, 0, 1, 0, 0, 0, 0, 0;
  EXPECT_EQ(hat(Vec3{0, 0, 1}), expected);
}

TEST(Hat, MatchesCrossProduct) {
  oracles::Rng rng(1);
  std::normal_distribution<double> n;
  for (int k = 0; k < 100; ++k) {
    const Vec3 a{n(rng), n(rng), n(rng)};
    const Vec3 b{n(rng), n(rng), n(rng)};
    EXPECT_LT((hat(a) * b - a.cross(b)).norm(), 1e-14);
  }
}

TEST(Vee, RoundTrips) {
  EXPECT_EQ(vee(Mat3::Zero()), Vec3::Zero());
  EXPECT_EQ(vee(hat(Vec3{1, 2, 3})), (Vec3{1, 2, 3}));
  oracles::Rng rng(2);
  std::normal_distribution<double> n;
  for (int k = 0; k < 100; ++k) {
    const Vec3 x{n(rng), n(rng), n(rng)};
    EXPECT_LT((vee(hat(x)) - x).norm(), 1e-12);
  }
}

TEST(Vee, RejectsNonSkewInput) {
  Mat3 m = hat(Vec3{1, 2, 3});
  m(0, 0) = 1e-6;
  try {
    vee(m);
    FAIL() << "expected a symmetry violation";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSymmetryViolation);
  }
}

TEST(ExpSo3, CanonicalValues) {
  EXPECT_EQ(exp_so3(Vec3::Zero()).matrix(), Mat3::Identity());
  EXPECT_LT((exp_so3(Vec3{0, 0, kPi / 2}).matrix() - rot_z(kPi / 2)).norm(), 1e-15);
}

TEST(ExpSo3, AverageOrientationRoundTrip) {
  const Vec3 w{0.27, 0.23, 0.24};
  EXPECT_LT((log_so3(exp_so3(w)) - w).norm(), 1e-10);
}

TEST(ExpSo3, AgreesWithEigenAngleAxis) {
  oracles::Rng rng(3);
  for (int k = 0; k < 200; ++k) {
    const Vec3 w = oracles::random_axis_angle(rng, 3.1);
    const Mat3 reference = Eigen::AngleAxisd(w.norm(), w.normalized()).toRotationMatrix();
    EXPECT_LT((exp_so3(w).matrix() - reference).norm(), 1e-13);
  }
}

TEST(LogSo3, CanonicalValues) {
  EXPECT_EQ(log_so3(Rotation{}), Vec3::Zero());
  EXPECT_LT((log_so3(Rotation::from_matrix(rot_z(kPi / 2))) - Vec3{0, 0, kPi / 2}).norm(),
            1e-15);
}

TEST(LogSo3, ExpLogIdentityOnRandomVectors) {
  oracles::Rng rng(4);
  for (int k = 0; k < 1000; ++k) {
    const Vec3 w = oracles::random_axis_angle(rng, 3.0);
    EXPECT_LT((log_so3(exp_so3(w)) - w).norm(), 1e-9);
  }
}

TEST(LogSo3, ExpOfLogIsIdentityOnRotations) {
  oracles::Rng rng(5);
  int checked = 0;
  while (checked < 1000) {
    const Rotation r = oracles::random_rotation(rng);
    if (std::acos(std::clamp((r.matrix().trace() - 1) / 2, -1.0, 1.0)) > kPi - 1e-6) continue;
    EXPECT_LT((exp_so3(log_so3(r)).matrix() - r.matrix()).norm(), 1e-9);
    ++checked;
  }
}

TEST(LogSo3, RejectsAnglesNearPi) {
  for (const double angle : {kPi, kPi - 1e-7}) {
    try {
      log_so3(exp_so3(Vec3{angle, 0, 0}));
      FAIL() << "angle " << angle << " should be rejected";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kAngleNearPi);
    }
  }
  EXPECT_NO_THROW(log_so3(exp_so3(Vec3{kPi - 1e-4, 0, 0})));
}

TEST(Rotation, FromMatrixRejectsNonRotations) {
  Mat3 scaled = 1.01 * Mat3::Identity();
  EXPECT_THROW(Rotation::from_matrix(scaled), Error);
  Mat3 reflection = Mat3::Identity();
  reflection(2, 2) = -1;
  EXPECT_THROW(Rotation::from_matrix(reflection), Error);
}

TEST(Rotation, CompositionStaysOnGroup) {
  oracles::Rng rng(6);
  Rotation r;
  for (int k = 0; k < 100000; ++k) r = r * exp_so3(oracles::random_axis_angle(rng, 0.01));
  EXPECT_LT(Rotation::orthogonality_residual(r.matrix()), 1e-9);
  EXPECT_NEAR(r.matrix().determinant(), 1.0, 1e-12);
}

TEST(SkewPart, Values) {
  EXPECT_EQ(skew_part(Rotation{}), Mat3::Zero());
  for (const double theta : {0.1, 0.7, 2.0, -1.3}) {
    const Mat3 s = skew_part(exp_so3(Vec3{0, 0, theta}));
    EXPECT_LT((s - std::sin(theta) * hat(Vec3{0, 0, 1})).norm(), 1e-15);
  }
  oracles::Rng rng(7);
  for (int k = 0; k < 100; ++k) {
    const Mat3 s = skew_part(oracles::random_rotation(rng));
    EXPECT_LT((s + s.transpose()).norm(), 1e-12);
  }
}

TEST(RotationError, Values) {
  EXPECT_EQ(rotation_error(Rotation{}), Vec3::Zero());
  EXPECT_LT((rotation_error(exp_so3(Vec3{0, 0, kPi / 2})) - Vec3{0, 0, 1}).norm(), 1e-15);
  oracles::Rng rng(8);
  for (int k = 0; k < 100; ++k) {
    const Vec3 w = oracles::random_axis_angle(rng, 1.0);
    const Vec3 expected = std::sin(w.norm()) * w.normalized();
    EXPECT_LT((rotation_error(exp_so3(w)) - expected).norm(), 1e-10);
  }
}

TEST(PoseError, Values) {
  EXPECT_EQ(pose_error(Pose::identity()), ErrorVector::Zero());
  ErrorVector translation;
  translation << 1, 2, 3, 0, 0, 0;
  EXPECT_EQ(pose_error(Pose{Rotation{}, Vec3{1, 2, 3}}), translation);
  ErrorVector rotation;
  rotation << 0, 0, 0, 0, 0, 1;
  EXPECT_LT((pose_error(Pose{exp_so3(Vec3{0, 0, kPi / 2}), Vec3::Zero()}) - rotation).norm(),
            1e-15);
}

TEST(PoseFromError, InvertsPoseError) {
  oracles::Rng rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 100; ++k) {
    ErrorVector e;
    e << u(rng), u(rng), u(rng), 0.5 * u(rng), 0.5 * u(rng), 0.5 * u(rng);
    EXPECT_LT((pose_error(pose_from_error(e)) - e).norm(), 1e-12);
  }
}

TEST(RotationDistance, Values) {
  EXPECT_EQ(rotation_distance(Rotation{}), 0.0);
  EXPECT_NEAR(rotation_distance(exp_so3(Vec3{kPi, 0, 0})), 4.0, 1e-12);
  EXPECT_NEAR(rotation_distance(exp_so3(Vec3{0, 1, 1}.normalized() * kPi)), 4.0, 1e-12);
  EXPECT_NEAR(rotation_distance(exp_so3(Vec3{0, 0, kPi / 2})), 2.0, 1e-12);
}

TEST(RotationDistance, MatchesCosineForm) {
  oracles::Rng rng(10);
  for (int k = 0; k < 1000; ++k) {
    const Vec3 w = oracles::random_axis_angle(rng, kPi);
    const Rotation r = exp_so3(w);
    EXPECT_NEAR(rotation_distance(r), 2.0 * (1.0 - std::cos(w.norm())), 1e-10);
    EXPECT_NEAR(rotation_distance(r), 0.5 * (Mat3::Identity() - r.matrix()).squaredNorm(), 1e-10);
  }
}

TEST(PoseDistance, Values) {
  EXPECT_EQ(pose_distance(Pose::identity()), 0.0);
  EXPECT_DOUBLE_EQ(pose_distance(Pose{Rotation{}, Vec3{1, 0, 0}}), 0.5);
  EXPECT_NEAR(pose_distance(Pose{exp_so3(Vec3{0, 0, kPi / 2}), Vec3{1, 0, 0}}), 2.5, 1e-12);
}

TEST(PoseDistance, Decomposes) {
  oracles::Rng rng(11);
  for (int k = 0; k < 200; ++k) {
    const Pose g = oracles::random_pose(rng, 2.0);
    EXPECT_EQ(pose_distance(g), 0.5 * g.position.squaredNorm() + rotation_distance(g.rotation));
  }
}

std::vector<Pose> reference_targets() {
  return {
      {exp_so3(Vec3{0.30, 0.19, 0.21}), Vec3{0.55, 1.00, -1.91}},
      {exp_so3(Vec3{0.21, 0.30, 0.19}), Vec3{0.30, 0.80, -1.84}},
      {exp_so3(Vec3{0.29, 0.20, 0.31}), Vec3{0.56, 1.05, -2.00}},
  };
}

TEST(MeanPose, SinglePoseIsItself) {
  const Pose g{exp_so3(Vec3{0.3, -0.2, 1.1}), Vec3{1, 2, 3}};
  const std::vector<Pose> one{g};
  const Pose m = mean_pose(one);
  EXPECT_LT((m.matrix() - g.matrix()).norm(), 1e-12);
}

TEST(MeanPose, ReferenceTargetAverage) {
  const auto targets = reference_targets();
  const Pose m = mean_pose(targets);
  const Vec3 p_expected{0.47, 0.95, -1.92};
  const Vec3 w_expected{0.27, 0.23, 0.24};
  const Vec3 w = log_so3(m.rotation);
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(m.position(k), p_expected(k), 0.005);
    EXPECT_NEAR(w(k), w_expected(k), 0.005);
  }
}

TEST(MeanPose, PositionMeanIsTranslationEquivariant) {
  oracles::Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Pose> poses;
    for (int j = 0; j < 4; ++j) {
      poses.push_back({exp_so3(oracles::random_axis_angle(rng, 1.0)),
                       oracles::random_pose(rng, 3.0).position});
    }
    const Vec3 shift = oracles::random_pose(rng, 5.0).position;
    std::vector<Pose> shifted = poses;
    for (auto& g : shifted) g.position += shift;
    const Vec3 moved = mean_pose(shifted).position - mean_pose(poses).position;
    EXPECT_LT((moved - shift).norm(), 1e-10);
  }
}

double mean_cost(const Pose& g, const std::vector<Pose>& poses) {
  double total = 0.0;
  for (const auto& gj : poses) total += pose_distance(g.inverse() * gj);
  return total;
}

// Central differences of the cost along the six directions of a local chart
// g * exp(twist): the gradient must vanish at the returned mean.
TEST(MeanPose, FirstOrderOptimality) {
  oracles::Rng rng(13);
  const double h = 1e-5;
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Pose> poses;
    for (int j = 0; j < 5; ++j) {
      poses.push_back({exp_so3(oracles::random_axis_angle(rng, 1.2)),
                       oracles::random_pose(rng, 2.0).position});
    }
    const Pose m = mean_pose(poses);
    Vec6 grad;
    for (int k = 0; k < 6; ++k) {
      Vec6 d = Vec6::Zero();
      d(k) = h;
      const double plus = mean_cost(m * exp_se3(Twist::from_vector(d)), poses);
      const double minus = mean_cost(m * exp_se3(Twist::from_vector(-d)), poses);
      grad(k) = (plus - minus) / (2 * h);
    }
    EXPECT_LT(grad.norm(), 1e-6) << "trial " << trial;
  }
}

TEST(ChordalMean, AgreesWithGradientDescent) {
  oracles::Rng rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Rotation> rs;
    for (int j = 0; j < 4; ++j) rs.push_back(exp_so3(oracles::random_axis_angle(rng, 1.5)));
    const Rotation closed = chordal_mean(rs);
    const Rotation descent = oracles::gradient_descent_rotation_mean(rs, 20, rng);
    EXPECT_LT((closed.matrix() - descent.matrix()).norm(), 1e-6);
  }
}

TEST(ChordalMean, RejectsDegenerateSets) {
  // Antipodal rotations about z average to diag(0, 0, 1): the minimiser is
  // any rotation about z.
  const std::vector<Rotation> rs{Rotation{}, exp_so3(Vec3{0, 0, kPi})};
  try {
    chordal_mean(rs);
    FAIL() << "expected a degenerate-mean error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateMean);
  }
}

TEST(ExpSe3, PureTranslationAndRotation) {
  const Pose t = exp_se3(Twist{Vec3{1, 2, 3}, Vec3::Zero()});
  EXPECT_EQ(t.rotation.matrix(), Mat3::Identity());
  EXPECT_LT((t.position - Vec3{1, 2, 3}).norm(), 1e-15);
  // A quarter turn about z with unit linear velocity along x traces a
  // quarter circle of radius 2/pi.
  const Pose q = exp_se3(Twist{Vec3{1, 0, 0}, Vec3{0, 0, kPi / 2}});
  const double r = 2 / kPi;
  EXPECT_LT((q.position - Vec3{r, r, 0}).norm(), 1e-12);
}

TEST(ExpSe3, MatchesMatrixExponentialSeries) {
  oracles::Rng rng(15);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 50; ++trial) {
    const Twist xi{Vec3{n(rng), n(rng), n(rng)}, oracles::random_axis_angle(rng, 2.0)};
    const Mat4 a = hat(xi);
    Mat4 series = Mat4::Identity();
    Mat4 term = Mat4::Identity();
    for (int k = 1; k < 40; ++k) {
      term = term * a / k;
      series += term;
    }
    EXPECT_LT((exp_se3(xi).matrix() - series).norm(), 1e-11);
  }
}

TEST(Pose, InverseAndComposition) {
  oracles::Rng rng(16);
  for (int k = 0; k < 100; ++k) {
    const Pose a = oracles::random_pose(rng, 2.0);
    const Pose b = oracles::random_pose(rng, 2.0);
    EXPECT_LT(((a * a.inverse()).matrix() - Mat4::Identity()).norm(), 1e-12);
    EXPECT_LT(((a * b).matrix() - a.matrix() * b.matrix()).norm(), 1e-12);
  }
}

TEST(TraceInequality, IdentityTripleIsTight) {
  const TraceInequality t = check_trace_inequality(Rotation{}, Rotation{}, Rotation{});
  EXPECT_EQ(t.lhs, 0.0);
  EXPECT_EQ(t.rhs, 0.0);
  EXPECT_EQ(t.slack, 0.0);
  EXPECT_TRUE(t.holds);
}

TEST(TraceInequality, CoincidentSecondAndThird) {
  oracles::Rng rng(17);
  for (int k = 0; k < 1000; ++k) {
    const Rotation r1 = oracles::random_rotation(rng);
    const Rotation r2 = oracles::random_rotation(rng);
    const TraceInequality t = check_trace_inequality(r1, r2, r2);
    EXPECT_GE(t.slack, -1e-9);
  }
}

TEST(TraceInequality, RandomSweep) {
  oracles::Rng rng(42);
  double worst = 1.0;
  for (int k = 0; k < 10000; ++k) {
    const TraceInequality t = check_trace_inequality(
        oracles::random_rotation(rng), oracles::random_rotation(rng),
        oracles::random_rotation(rng));
    worst = std::min(worst, t.slack);
    ASSERT_TRUE(t.holds) << "slack " << t.slack;
  }
  EXPECT_GE(worst, -1e-9);
}

// Near-coincident triples probe the regime where both sides vanish.
TEST(TraceInequality, ClusteredTriples) {
  oracles::Rng rng(18);
  for (int k = 0; k < 2000; ++k) {
    const Rotation base = oracles::random_rotation(rng);
    const Rotation r1 = base * exp_so3(oracles::random_axis_angle(rng, 0.05));
    const Rotation r2 = base * exp_so3(oracles::random_axis_angle(rng, 0.05));
    const Rotation r3 = base * exp_so3(oracles::random_axis_angle(rng, 0.05));
    EXPECT_GE(check_trace_inequality(r1, r2, r3).slack, -1e-9);
  }
}

}  // namespace
}  // namespace netvmo
