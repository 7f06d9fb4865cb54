#pragma once

#include <array>
#include <optional>
#include <vector>

#include "aeromanip/model.hpp"
#include "aeromanip/spatial.hpp"

namespace aeromanip {

/// Frames of the arm expressed in the body frame. Index 0 is the mount frame,
/// 1..5 the link frames and 6 the end-effector.
struct ChainPose {
  std::array<Vec3, kNumJoints + 2> origin;
  std::array<Mat3, kNumJoints + 2> rotation;

  /// Joint axis z_i (i = 1..5) in the body frame.
  Vec3 axis(int joint) const { return rotation[joint].col(2); }
  const Vec3& ee_position() const { return origin[kNumJoints + 1]; }
  const Mat3& ee_rotation() const { return rotation[kNumJoints + 1]; }
};

ChainPose forward_kinematics(const ArmModel& arm, const Vec5& q);

struct Pose {
  Vec3 position;
  Mat3 rotation;
};

/// p_E = p_B + R_B p_E^B and R_E = R_B R_E^B.
Pose end_effector_world(const Vec3& p_B, const Mat3& R_B, const Vec3& p_EB, const Mat3& R_EB);

struct JacobianStack {
  Eigen::Matrix<double, 3, 5> Jv;  ///< m / rad, inertial frame
  Eigen::Matrix<double, 3, 5> Jo;  ///< rad / rad, inertial frame
  Eigen::Matrix<double, 2, 3> T;   ///< omega_E -> (alpha_dot, beta_dot)
  Eigen::Matrix<double, 5, 6> JB;
  Mat5 Jq;
};

/// Maps world angular velocity of the end-effector to (alpha_dot, beta_dot).
/// Throws AttitudeSingularity when beta is within 1e-6 of +-pi/2.
Eigen::Matrix<double, 2, 3> tool_rate_map(double alpha, double beta);

/// Jacobians for eta_E = J_B eta_B + J_q q_dot with eta_E = [v_E; alpha_dot;
/// beta_dot] and eta_B = [v_B; omega_B] (omega in the inertial frame).
JacobianStack jacobians(const ArmModel& arm, const Vec5& q, const Mat3& R_B, double alpha,
                        double beta);

/// Same, with (alpha, beta) taken from the current end-effector attitude.
JacobianStack jacobians(const ArmModel& arm, const Vec5& q, const Mat3& R_B);

struct IkOptions {
  /// Selected by index 0..7 (bit0 shoulder flip, bit1 elbow flip, bit2 wrist
  /// flip); nullopt picks the feasible branch nearest to `previous`.
  std::optional<int> branch;
  Vec5 previous = Vec5::Zero();
  double limit_tolerance = 1e-9;
};

/// All feasible closed-form solutions (at most 8) placing the end-effector at
/// `p_EB` (body frame) with its tool axis along `direction` (body frame).
std::vector<Vec5> inverse_kinematics_all(const ArmModel& arm, const Vec3& p_EB,
                                         const Vec3& direction, const IkOptions& opts = {});

/// Closed-form inverse kinematics for a body-frame target and tool angles
/// (alpha, beta) relative to the body frame.
/// Throws Unreachable or NoFeasibleBranch.
Vec5 inverse_kinematics(const ArmModel& arm, const Vec3& p_EB, double alpha, double beta,
                        const IkOptions& opts = {});

/// Same with the tool axis direction given explicitly.
Vec5 inverse_kinematics_dir(const ArmModel& arm, const Vec3& p_EB, const Vec3& direction,
                            const IkOptions& opts = {});

/// q_dot_d = J_q^+ (eta_E_d - J_B eta_B). Throws KinematicSingularity when the
/// smallest singular value of J_q is below `sigma_tol`.
Vec5 desired_joint_velocity(const JacobianStack& stack, const Vec5& eta_E_d, const Vec6& eta_B,
                            double sigma_tol = 1e-6);

bool within_limits(const ArmModel& arm, const Vec5& q, double tol = 0.0);

}  // namespace aeromanip
