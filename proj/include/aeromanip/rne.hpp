#pragma once

#include <array>

#include "aeromanip/model.hpp"

namespace aeromanip {

/// Motion of the quadcopter base seen by the arm.
struct BaseMotion {
  Mat3 R_B = Mat3::Identity();
  Vec3 v_dot = Vec3::Zero();      ///< linear acceleration, inertial frame (m/s^2)
  Vec3 omega = Vec3::Zero();      ///< angular velocity, body frame (rad/s)
  Vec3 omega_dot = Vec3::Zero();  ///< angular acceleration, body frame (rad/s^2)
};

/// Force in the inertial frame, torque in the body frame.
struct Wrench {
  Vec3 force = Vec3::Zero();
  Vec3 torque = Vec3::Zero();
};

struct RneResult {
  Vec5 tau = Vec5::Zero();              ///< joint torques (N m)
  std::array<Vec3, kNumJoints> force;   ///< f_i exerted on link i by link i-1, link frame
  std::array<Vec3, kNumJoints> moment;  ///< n_i about the origin of frame i, link frame
  Wrench coupling;                      ///< (f_D, tau_D^B) acting on the base
};

/// Newton-Euler recursion with the quadcopter as link 0. Gravity enters as an
/// upward acceleration of the base, so the base wrench includes the arm weight.
RneResult rne(const ArmModel& arm, const BaseMotion& base, const Vec5& q, const Vec5& qd,
              const Vec5& qdd, double gravity);

/// f_D = -R_B R_1 f_1 - m_M g e3 and tau_D^B = -p_1 x (R_1 f_1) - R_1 n_1.
Wrench rne_coupling(const ArmModel& arm, const BaseMotion& base, const Vec5& q, const Vec5& qd,
                    const Vec5& qdd, double gravity);

/// Joint-space inertia matrix, one unit-acceleration column per joint.
Mat5 arm_inertia_matrix(const ArmModel& arm, const Vec5& q);

/// Joint torques at zero joint acceleration: Coriolis, centrifugal, gravity and
/// base-motion terms.
Vec5 arm_bias(const ArmModel& arm, const BaseMotion& base, const Vec5& q, const Vec5& qd,
              double gravity);

/// Kinematic state of the base used for energy and momentum bookkeeping.
struct BaseVelocity {
  Mat3 R_B = Mat3::Identity();
  Vec3 p = Vec3::Zero();      ///< inertial position
  Vec3 v = Vec3::Zero();      ///< inertial velocity
  Vec3 omega = Vec3::Zero();  ///< body angular velocity
};

struct LinkMotion {
  std::array<Vec3, kNumJoints> com_position;  ///< inertial frame
  std::array<Vec3, kNumJoints> com_velocity;  ///< inertial frame
  std::array<Vec3, kNumJoints> omega;         ///< link frame
};

LinkMotion link_motion(const ArmModel& arm, const BaseVelocity& base, const Vec5& q,
                       const Vec5& qd);

/// Sum of m_i v_Ci in the inertial frame.
Vec3 arm_linear_momentum(const ArmModel& arm, const BaseVelocity& base, const Vec5& q,
                         const Vec5& qd);

double arm_kinetic_energy(const ArmModel& arm, const BaseVelocity& base, const Vec5& q,
                          const Vec5& qd);

/// Gravitational potential energy of the arm (NED, so U = -sum m_i g z_Ci).
double arm_potential_energy(const ArmModel& arm, const BaseVelocity& base, const Vec5& q,
                            double gravity);

}  // namespace aeromanip
