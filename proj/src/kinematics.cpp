#include "aeromanip/kinematics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace aeromanip {
namespace {

constexpr double kPi = std::numbers::pi;

// Rotate v (perpendicular to the unit axis n) about n by angle.
Vec3 rotate_in_plane(const Vec3& v, const Vec3& n, double angle) {
  return std::cos(angle) * v + std::sin(angle) * n.cross(v);
}

// Any unit vector perpendicular to d.
Vec3 any_perpendicular(const Vec3& d) {
  const Vec3 trial = std::abs(d.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  return d.cross(trial).normalized();
}

}  // namespace

ChainPose forward_kinematics(const ArmModel& arm, const Vec5& q) {
  ChainPose pose;
  Mat3 R = arm.mount_rotation;
  Vec3 p = arm.mount_position;
  pose.origin[0] = p;
  pose.rotation[0] = R;
  for (int i = 0; i < kNumJoints; ++i) {
    const Eigen::Matrix4d T = mdh_transform(arm.links[i].mdh, q[i]);
    p = p + R * T.block<3, 1>(0, 3);
    R = R * T.block<3, 3>(0, 0);
    pose.origin[i + 1] = p;
    pose.rotation[i + 1] = R;
  }
  pose.origin[kNumJoints + 1] = p + R * arm.tool_position;
  pose.rotation[kNumJoints + 1] = R * arm.tool_rotation;
  return pose;
}

Pose end_effector_world(const Vec3& p_B, const Mat3& R_B, const Vec3& p_EB, const Mat3& R_EB) {
  return {p_B + R_B * p_EB, R_B * R_EB};
}

Eigen::Matrix<double, 2, 3> tool_rate_map(double alpha, double beta) {
  if (std::abs(std::cos(beta)) < 1e-6) {
    throw AttitudeSingularity("end-effector pitch beta is at +-pi/2; alpha rate undefined");
  }
  const double sa = std::sin(alpha), ca = std::cos(alpha), tb = std::tan(beta);
  Eigen::Matrix<double, 2, 3> T;
  T << 1, sa * tb, -ca * tb,
       0, ca, sa;
  return T;
}

JacobianStack jacobians(const ArmModel& arm, const Vec5& q, const Mat3& R_B, double alpha,
                        double beta) {
  const ChainPose pose = forward_kinematics(arm, q);
  JacobianStack s;
  const Vec3& pE = pose.ee_position();
  for (int i = 0; i < kNumJoints; ++i) {
    const Vec3 z = R_B * pose.axis(i + 1);
    s.Jo.col(i) = z;
    s.Jv.col(i) = z.cross(R_B * (pE - pose.origin[i + 1]));
  }
  s.T = tool_rate_map(alpha, beta);
  s.JB.setZero();
  s.JB.block<3, 3>(0, 0) = Mat3::Identity();
  s.JB.block<3, 3>(0, 3) = -skew(R_B * pE);
  s.JB.block<2, 3>(3, 3) = s.T;
  s.Jq.block<3, 5>(0, 0) = s.Jv;
  s.Jq.block<2, 5>(3, 0) = s.T * s.Jo;
  return s;
}

JacobianStack jacobians(const ArmModel& arm, const Vec5& q, const Mat3& R_B) {
  const ChainPose pose = forward_kinematics(arm, q);
  const Eigen::Vector2d ab = tool_angles(R_B * pose.ee_rotation());
  return jacobians(arm, q, R_B, ab[0], ab[1]);
}

bool within_limits(const ArmModel& arm, const Vec5& q, double tol) {
  for (int i = 0; i < kNumJoints; ++i) {
    if (q[i] < arm.links[i].lower - tol || q[i] > arm.links[i].upper + tol) return false;
  }
  return true;
}

namespace {

struct Candidate {
  Vec5 q;
  int branch;
};

// Enumerates the eight closed-form branches; infeasible ones are skipped.
// Returns false through `reachable` when no branch can meet the distance.
std::vector<Candidate> solve_branches(const ArmModel& arm, const Vec3& p_EB, const Vec3& dir_B,
                                      const Vec5& previous, double limit_tol, bool& reachable) {
  const auto& L = arm.links;
  // Work in the mount frame.
  const Vec3 p = arm.mount_rotation.transpose() * (p_EB - arm.mount_position);
  const Vec3 d = (arm.mount_rotation.transpose() * dir_B).normalized();

  const Mat3 R0 = rot_x(L[0].mdh.alpha);
  const Vec3 shoulder = Vec3(L[0].mdh.a, 0, 0) + R0 * Vec3(0, 0, L[0].mdh.d);
  const double upper = L[2].mdh.d;
  const double fore = L[4].mdh.a;
  const double s1 = std::sin(L[1].mdh.alpha), s2 = std::sin(L[2].mdh.alpha);
  const double s3 = std::sin(L[3].mdh.alpha);

  // Tool point and tool axis as in-plane angles relative to x5.
  const Vec3 tool_axis5 = arm.tool_rotation.col(2);
  const double tau = std::atan2(tool_axis5.y(), tool_axis5.x());
  const double tool_len = arm.tool_position.norm();
  const double rho = tool_len > 0 ? std::atan2(arm.tool_position.y(), arm.tool_position.x()) : 0.0;

  Vec3 normal = (p - shoulder).cross(d);
  if (normal.norm() < 1e-9) {
    // Target on the tool axis through the shoulder: keep the previous plane.
    const ChainPose prev = forward_kinematics(arm, previous);
    Vec3 n_prev = arm.mount_rotation.transpose() * prev.axis(4);
    n_prev -= n_prev.dot(d) * d;
    normal = n_prev.norm() > 1e-9 ? n_prev : any_perpendicular(d);
  }
  normal.normalize();

  std::vector<Candidate> out;
  reachable = false;
  for (int wrist_flip = 0; wrist_flip < 2; ++wrist_flip) {
    const Vec3 n = wrist_flip ? Vec3(-normal) : normal;
    const Vec3 e1 = d;
    const Vec3 e2 = n.cross(d);
    auto ang = [&](const Vec3& v) { return std::atan2(v.dot(e2), v.dot(e1)); };

    const Vec3 x5 = rotate_in_plane(d, n, -tau);
    const Vec3 wrist = p - tool_len * rotate_in_plane(x5, n, rho) - shoulder;
    const double w = wrist.norm();
    const double c4 = (w * w - upper * upper - fore * fore) / (2.0 * upper * fore);
    if (c4 > 1.0 + 1e-12 || c4 < -1.0 - 1e-12) continue;
    reachable = true;
    const double phi_abs = std::acos(std::clamp(c4, -1.0, 1.0));

    for (int elbow_flip = 0; elbow_flip < 2; ++elbow_flip) {
      const double phi = elbow_flip ? -phi_abs : phi_abs;
      const double a_ang = ang(wrist) - std::atan2(fore * std::sin(phi), upper + fore * std::cos(phi));
      const Vec3 a = std::cos(a_ang) * e1 + std::sin(a_ang) * e2;
      const double theta4 = std::atan2(s3 * std::cos(phi), -s3 * std::sin(phi));
      const double theta5 = wrap_angle(ang(x5) - a_ang - phi);

      // Frame 3 orientation in the mount frame: z3 = a, z4 = -s3 * y3 = n.
      Mat3 R3;
      R3.col(2) = a;
      R3.col(1) = -s3 * n;
      R3.col(0) = R3.col(1).cross(R3.col(2));
      const Vec3 a0 = R0.transpose() * a;

      for (int shoulder_flip = 0; shoulder_flip < 2; ++shoulder_flip) {
        const double c2 = std::clamp(-a0.z() / (s1 * s2), -1.0, 1.0);
        const double sin2 = (shoulder_flip ? -1.0 : 1.0) * std::sqrt(std::max(0.0, 1.0 - c2 * c2));
        const double theta2 = std::atan2(sin2, c2);
        double theta1;
        if (std::abs(sin2) > 1e-9) {
          theta1 = std::atan2(a0.y() / (s2 * sin2), a0.x() / (s2 * sin2));
        } else {
          theta1 = previous[0] + L[0].mdh.theta_offset;
        }
        const Mat3 R2 = R0 * rot_z(theta1) * rot_x(L[1].mdh.alpha) * rot_z(theta2) *
                        rot_x(L[2].mdh.alpha);
        const Mat3 X = R2.transpose() * R3;
        const double theta3 = std::atan2(X(1, 0), X(0, 0));

        const Vec5 theta(theta1, theta2, theta3, theta4, theta5);
        Vec5 q;
        for (int i = 0; i < kNumJoints; ++i) q[i] = wrap_angle(theta[i] - L[i].mdh.theta_offset);
        if (!within_limits(arm, q, limit_tol)) continue;
        for (int i = 0; i < kNumJoints; ++i) q[i] = std::clamp(q[i], L[i].lower, L[i].upper);
        out.push_back({q, shoulder_flip | (elbow_flip << 1) | (wrist_flip << 2)});
      }
    }
  }
  return out;
}

}  // namespace

std::vector<Vec5> inverse_kinematics_all(const ArmModel& arm, const Vec3& p_EB,
                                         const Vec3& direction, const IkOptions& opts) {
  bool reachable = false;
  std::vector<Vec5> out;
  for (const auto& c :
       solve_branches(arm, p_EB, direction, opts.previous, opts.limit_tolerance, reachable)) {
    out.push_back(c.q);
  }
  return out;
}

Vec5 inverse_kinematics_dir(const ArmModel& arm, const Vec3& p_EB, const Vec3& direction,
                            const IkOptions& opts) {
  const double dist = (p_EB - arm.mount_position).norm();
  if (dist > arm.reach() + 1e-12) {
    throw Unreachable("target is " + format_number(dist) + " m from the mount; reach is " +
                      format_number(arm.reach()) + " m");
  }
  bool reachable = false;
  const auto cands =
      solve_branches(arm, p_EB, direction, opts.previous, opts.limit_tolerance, reachable);
  if (!reachable) {
    throw Unreachable("wrist point out of the elbow annulus for target at " +
                      format_number(dist) + " m");
  }
  if (cands.empty()) throw NoFeasibleBranch("every closed-form branch violates a joint limit");
  if (opts.branch) {
    for (const auto& c : cands) {
      if (c.branch == *opts.branch) return c.q;
    }
    throw NoFeasibleBranch("requested branch " + std::to_string(*opts.branch) + " is infeasible");
  }
  const Candidate* best = nullptr;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const auto& c : cands) {
    double dd = 0.0;
    for (int i = 0; i < kNumJoints; ++i) {
      const double e = wrap_angle(c.q[i] - opts.previous[i]);
      dd += e * e;
    }
    if (dd < best_dist) {
      best_dist = dd;
      best = &c;
    }
  }
  return best->q;
}

Vec5 inverse_kinematics(const ArmModel& arm, const Vec3& p_EB, double alpha, double beta,
                        const IkOptions& opts) {
  return inverse_kinematics_dir(arm, p_EB, tool_direction(alpha, beta), opts);
}

Vec5 desired_joint_velocity(const JacobianStack& stack, const Vec5& eta_E_d, const Vec6& eta_B,
                            double sigma_tol) {
  Eigen::JacobiSVD<Mat5> svd(stack.Jq, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double sigma_min = svd.singularValues()[kNumJoints - 1];
  if (sigma_min < sigma_tol) {
    throw KinematicSingularity("J_q is singular (sigma_min = " + format_number(sigma_min) + ")",
                               sigma_min);
  }
  const Vec5 rhs = eta_E_d - stack.JB * eta_B;
  // Moore-Penrose solve; identical to J_q^T (J_q J_q^T)^{-1} rhs for full rank
  // but without squaring the condition number.
  return svd.solve(rhs);
}

}  // namespace aeromanip
