#pragma once

#include "aeromanip/types.hpp"

namespace aeromanip {

/// Three Euler angles (rad). For the base these are roll/pitch/yaw
/// (phi, theta, psi); for the end-effector they are (alpha, beta, gamma).
struct EulerAngles {
  double first = 0.0;
  double second = 0.0;
  double third = 0.0;

  Vec3 vec() const { return {first, second, third}; }
  static EulerAngles from(const Vec3& v) { return {v.x(), v.y(), v.z()}; }
};

Mat3 rot_x(double angle);
Mat3 rot_y(double angle);
Mat3 rot_z(double angle);

/// R_x(first) * R_y(second) * R_z(third). End-effector attitude convention.
Mat3 rot_from_euler(const EulerAngles& a);

/// R_z(psi) * R_y(theta) * R_x(phi) with a = (phi, theta, psi). Base attitude
/// convention; it is the one whose body-rate map is euler_rate_matrix().
Mat3 base_rotation(const EulerAngles& a);

/// Inverse of base_rotation for |theta| < pi/2.
EulerAngles base_euler(const Mat3& R);

/// (alpha, beta) of an end-effector rotation in the X-Y-Z convention. Only the
/// third column of R is used, so gamma does not affect the result.
Eigen::Vector2d tool_angles(const Mat3& R);

/// Direction of the third axis of R_x(alpha) R_y(beta) R_z(*).
Vec3 tool_direction(double alpha, double beta);

/// Euler-rate to body-rate map Q (omega_B^B = Q * dPhi/dt).
Mat3 euler_rate_matrix(const EulerAngles& a);

/// Time derivative of Q along the Euler-angle rate a_dot.
Mat3 euler_rate_matrix_derivative(const EulerAngles& a, const Vec3& a_dot);

/// Q^{-1}; throws GimbalProximity when |cos(theta)| < 1e-6.
Mat3 euler_rate_matrix_inverse(const EulerAngles& a);

Mat3 skew(const Vec3& v);

/// Rodrigues formula; the inverse of rotation_error_vector.
Mat3 rot_from_axis_angle(const Vec3& rotvec);

/// Matrix logarithm of a rotation as an axis-angle vector with norm in [0, pi].
Vec3 rotation_error_vector(const Mat3& E);

/// Wrap to (-pi, pi].
double wrap_angle(double a);

bool is_rotation(const Mat3& R, double tol = 1e-10);

}  // namespace aeromanip
