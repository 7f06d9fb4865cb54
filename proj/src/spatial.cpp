#include "aeromanip/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace aeromanip {

Mat3 rot_x(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 R;
  R << 1, 0, 0, 0, c, -s, 0, s, c;
  return R;
}

Mat3 rot_y(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 R;
  R << c, 0, s, 0, 1, 0, -s, 0, c;
  return R;
}

Mat3 rot_z(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 R;
  R << c, -s, 0, s, c, 0, 0, 0, 1;
  return R;
}

Mat3 rot_from_euler(const EulerAngles& a) {
  return rot_x(a.first) * rot_y(a.second) * rot_z(a.third);
}

Mat3 base_rotation(const EulerAngles& a) {
  return rot_z(a.third) * rot_y(a.second) * rot_x(a.first);
}

EulerAngles base_euler(const Mat3& R) {
  const double theta = std::asin(std::clamp(-R(2, 0), -1.0, 1.0));
  const double phi = std::atan2(R(2, 1), R(2, 2));
  const double psi = std::atan2(R(1, 0), R(0, 0));
  return {phi, theta, psi};
}

Eigen::Vector2d tool_angles(const Mat3& R) {
  const Vec3 z = R.col(2);
  return {std::atan2(-z.y(), z.z()), std::asin(std::clamp(z.x(), -1.0, 1.0))};
}

Vec3 tool_direction(double alpha, double beta) {
  return {std::sin(beta), -std::sin(alpha) * std::cos(beta),
          std::cos(alpha) * std::cos(beta)};
}

Mat3 euler_rate_matrix(const EulerAngles& a) {
  const double sphi = std::sin(a.first), cphi = std::cos(a.first);
  const double sth = std::sin(a.second), cth = std::cos(a.second);
  Mat3 Q;
  Q << 1, 0, -sth,
       0, cphi, cth * sphi,
       0, -sphi, cth * cphi;
  return Q;
}

Mat3 euler_rate_matrix_derivative(const EulerAngles& a, const Vec3& a_dot) {
  const double sphi = std::sin(a.first), cphi = std::cos(a.first);
  const double sth = std::sin(a.second), cth = std::cos(a.second);
  const double dphi = a_dot.x(), dth = a_dot.y();
  Mat3 Qd;
  Qd << 0, 0, -cth * dth,
        0, -sphi * dphi, -sth * dth * sphi + cth * cphi * dphi,
        0, -cphi * dphi, -sth * dth * cphi - cth * sphi * dphi;
  return Qd;
}

Mat3 euler_rate_matrix_inverse(const EulerAngles& a) {
  const double sphi = std::sin(a.first), cphi = std::cos(a.first);
  const double cth = std::cos(a.second), tth = std::tan(a.second);
  if (std::abs(cth) < 1e-6) {
    throw GimbalProximity("euler rate map is singular at pitch " + std::to_string(a.second));
  }
  Mat3 Qi;
  Qi << 1, sphi * tth, cphi * tth,
        0, cphi, -sphi,
        0, sphi / cth, cphi / cth;
  return Qi;
}

Mat3 skew(const Vec3& v) {
  Mat3 S;
  S << 0, -v.z(), v.y(),
       v.z(), 0, -v.x(),
       -v.y(), v.x(), 0;
  return S;
}

Mat3 rot_from_axis_angle(const Vec3& rotvec) {
  const double angle = rotvec.norm();
  if (angle < 1e-12) return Mat3::Identity() + skew(rotvec);
  const Vec3 axis = rotvec / angle;
  const Mat3 K = skew(axis);
  return Mat3::Identity() + std::sin(angle) * K + (1.0 - std::cos(angle)) * K * K;
}

Vec3 rotation_error_vector(const Mat3& E) {
  const double cos_angle = std::clamp((E.trace() - 1.0) / 2.0, -1.0, 1.0);
  const double angle = std::acos(cos_angle);
  const Vec3 vee(E(2, 1) - E(1, 2), E(0, 2) - E(2, 0), E(1, 0) - E(0, 1));
  if (angle < 1e-6) {
    // first-order expansion; exact to O(angle^3)
    return 0.5 * vee;
  }
  if (std::numbers::pi - angle > 1e-4) {
    return angle / (2.0 * std::sin(angle)) * vee;
  }
  // Near pi the skew part vanishes; recover the axis from the symmetric part.
  const Mat3 B = 0.5 * (E + E.transpose()) - cos_angle * Mat3::Identity();
  int k = 0;
  B.diagonal().maxCoeff(&k);
  Vec3 axis = B.col(k) / std::sqrt(std::max(B(k, k), 1e-300));
  axis.normalize();
  if (axis.dot(vee) < 0.0) axis = -axis;
  return angle * axis;
}

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a + std::numbers::pi, two_pi);
  if (a <= 0.0) a += two_pi;
  return a - std::numbers::pi;
}

bool is_rotation(const Mat3& R, double tol) {
  return (R.transpose() * R - Mat3::Identity()).cwiseAbs().maxCoeff() < tol &&
         std::abs(R.determinant() - 1.0) < tol;
}

}  // namespace aeromanip
