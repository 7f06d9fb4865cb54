#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "aeromanip/spatial.hpp"

using namespace aeromanip;

namespace {

constexpr double kPi = std::numbers::pi;

Vec3 random_angles(std::mt19937_64& rng, double pitch_limit) {
  std::uniform_real_distribution<double> u(-kPi, kPi), p(-pitch_limit, pitch_limit);
  return {u(rng), p(rng), u(rng)};
}

}  // namespace

TEST(Spatial, ElementaryRotationsAreProperRotations) {
  for (double a : {-2.0, -0.3, 0.0, 0.7, 3.0}) {
    EXPECT_TRUE(is_rotation(rot_x(a)));
    EXPECT_TRUE(is_rotation(rot_y(a)));
    EXPECT_TRUE(is_rotation(rot_z(a)));
  }
  // Right-handed quarter turns.
  EXPECT_TRUE((rot_z(kPi / 2) * Vec3::UnitX()).isApprox(Vec3::UnitY(), 1e-12));
  EXPECT_TRUE((rot_x(kPi / 2) * Vec3::UnitY()).isApprox(Vec3::UnitZ(), 1e-12));
  EXPECT_TRUE((rot_y(kPi / 2) * Vec3::UnitZ()).isApprox(Vec3::UnitX(), 1e-12));
}

TEST(Spatial, EulerConventionsCompose) {
  const EulerAngles a{0.1, -0.2, 0.3};
  EXPECT_TRUE(rot_from_euler(a).isApprox(rot_x(0.1) * rot_y(-0.2) * rot_z(0.3), 1e-14));
  EXPECT_TRUE(base_rotation(a).isApprox(rot_z(0.3) * rot_y(-0.2) * rot_x(0.1), 1e-14));
}

TEST(Spatial, BaseEulerRoundTrip) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 v = random_angles(rng, 1.5);
    const EulerAngles back = base_euler(base_rotation(EulerAngles::from(v)));
    EXPECT_NEAR(back.first, v.x(), 1e-9);
    EXPECT_NEAR(back.second, v.y(), 1e-9);
    EXPECT_NEAR(back.third, v.z(), 1e-9);
  }
}

TEST(Spatial, ToolAnglesIgnoreGammaAndMatchDirection) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const Vec3 v = random_angles(rng, 1.5);
    const Mat3 R = rot_from_euler(EulerAngles::from(v));
    const Eigen::Vector2d ab = tool_angles(R);
    EXPECT_NEAR(wrap_angle(ab[0] - v.x()), 0.0, 1e-9);
    EXPECT_NEAR(ab[1], v.y(), 1e-9);
    EXPECT_TRUE(tool_direction(v.x(), v.y()).isApprox(R.col(2), 1e-12));
  }
}

TEST(Spatial, EulerRateMatrixMatchesFiniteDifference) {
  // omega^B = Q(Phi) dPhi/dt, checked through R^T dR/dt = skew(omega^B).
  std::mt19937_64 rng(11);
  const double h = 1e-6;
  for (int i = 0; i < 200; ++i) {
    const Vec3 phi = random_angles(rng, 1.3);
    const Vec3 rate = random_angles(rng, 1.0);
    const Mat3 R = base_rotation(EulerAngles::from(phi));
    const Mat3 Rp = base_rotation(EulerAngles::from(phi + h * rate));
    const Mat3 Rm = base_rotation(EulerAngles::from(phi - h * rate));
    const Mat3 W = R.transpose() * (Rp - Rm) / (2 * h);
    const Vec3 omega(W(2, 1), W(0, 2), W(1, 0));
    EXPECT_LT((euler_rate_matrix(EulerAngles::from(phi)) * rate - omega).norm(), 1e-7);
  }
}

TEST(Spatial, EulerRateMatrixDerivativeMatchesFiniteDifference) {
  std::mt19937_64 rng(5);
  const double h = 1e-6;
  for (int i = 0; i < 200; ++i) {
    const Vec3 phi = random_angles(rng, 1.3);
    const Vec3 rate = random_angles(rng, 1.0);
    const Mat3 fd = (euler_rate_matrix(EulerAngles::from(phi + h * rate)) -
                     euler_rate_matrix(EulerAngles::from(phi - h * rate))) /
                    (2 * h);
    EXPECT_LT((euler_rate_matrix_derivative(EulerAngles::from(phi), rate) - fd).norm(), 1e-8);
  }
}

TEST(Spatial, EulerRateInverse) {
  const EulerAngles a{0.4, -0.7, 1.2};
  EXPECT_TRUE((euler_rate_matrix(a) * euler_rate_matrix_inverse(a)).isIdentity(1e-12));
  EXPECT_THROW(euler_rate_matrix_inverse({0.0, kPi / 2, 0.0}), GimbalProximity);
  EXPECT_NO_THROW(euler_rate_matrix_inverse({0.0, kPi / 2 - 1e-3, 0.0}));
}

TEST(Spatial, SkewIsCrossProduct) {
  const Vec3 a(1, -2, 0.5), b(0.3, 4, -1);
  EXPECT_TRUE((skew(a) * b).isApprox(a.cross(b), 1e-14));
  EXPECT_TRUE((skew(a) + skew(a).transpose()).isZero(0.0));
}

TEST(Spatial, AxisAngleRoundTripIncludingNearPi) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1, 1);
  std::uniform_real_distribution<double> ang(0.0, kPi - 1e-9);
  for (int i = 0; i < 2000; ++i) {
    Vec3 axis(u(rng), u(rng), u(rng));
    axis.normalize();
    const double angle = i < 100 ? kPi - 1e-7 * (i + 1) : ang(rng);
    const Mat3 R = rot_from_axis_angle(angle * axis);
    EXPECT_TRUE(is_rotation(R, 1e-12));
    const Vec3 back = rotation_error_vector(R);
    EXPECT_LT((back - angle * axis).norm(), 1e-6) << "angle " << angle;
    EXPECT_TRUE(rot_from_axis_angle(back).isApprox(R, 1e-9));
  }
  EXPECT_TRUE(rotation_error_vector(Mat3::Identity()).isZero(0.0));
}

TEST(Spatial, WrapAngleRange) {
  EXPECT_DOUBLE_EQ(wrap_angle(kPi), kPi);
  EXPECT_NEAR(wrap_angle(-kPi), kPi, 1e-15);
  EXPECT_NEAR(wrap_angle(3 * kPi / 2), -kPi / 2, 1e-12);
  EXPECT_NEAR(wrap_angle(-7.0), -7.0 + 2 * kPi, 1e-12);
  for (double a = -20; a < 20; a += 0.37) {
    const double w = wrap_angle(a);
    EXPECT_GT(w, -kPi);
    EXPECT_LE(w, kPi);
    EXPECT_NEAR(std::remainder(w - a, 2 * kPi), 0.0, 1e-12);
  }
}

TEST(Spatial, IsRotationRejectsReflectionsAndScaling) {
  Mat3 F = Mat3::Identity();
  F(2, 2) = -1;
  EXPECT_FALSE(is_rotation(F));
  EXPECT_FALSE(is_rotation(1.01 * Mat3::Identity()));
}
