#include "aeromanip/coordination.hpp"

#include "aeromanip/workspace.hpp"

namespace aeromanip {
namespace {

CoordinationOutput arm_setpoint(const EndEffectorGoal& goal, const BaseState& base,
                                const ArmModel& arm, const Vec5& previous) {
  const Mat3 R_B = base_rotation(EulerAngles::from(base.phi));
  CoordinationOutput out;
  out.p_EB_d = R_B.transpose() * (goal.p - base.p);
  const Vec3 dir_B = R_B.transpose() * tool_direction(goal.alpha, goal.beta);
  IkOptions opts;
  opts.previous = previous;
  out.q_d = inverse_kinematics_dir(arm, out.p_EB_d, dir_B, opts);

  const JacobianStack J = jacobians(arm, out.q_d, R_B, goal.alpha, goal.beta);
  Vec5 eta_E;
  eta_E << goal.p_dot, goal.alpha_dot, goal.beta_dot;
  Vec6 eta_B;
  eta_B << base.v, R_B * base.omega;
  out.qd_d = desired_joint_velocity(J, eta_E, eta_B);
  return out;
}

}  // namespace

const char* mode_name(Mode m) { return m == Mode::Hover ? "hover" : "cooperation"; }

Mode parse_mode(const std::string& s) {
  if (s == "hover") return Mode::Hover;
  if (s == "cooperation") return Mode::Cooperation;
  throw ConfigError("unknown mode '" + s + "' (expected hover or cooperation)");
}

CoordinationOutput coordinate_hover(const EndEffectorGoal& goal, const BaseState& base,
                                    const ArmModel& arm, const Vec3& hover_position,
                                    const Vec5& previous) {
  CoordinationOutput out = arm_setpoint(goal, base, arm, previous);
  out.mode = Mode::Hover;
  out.p_B_d = hover_position;
  return out;
}

CoordinationOutput coordinate_cooperation(const EndEffectorGoal& goal, const BaseState& base,
                                          const ArmModel& arm, const Vec3& p_C,
                                          const Vec5& previous) {
  CoordinationOutput out = arm_setpoint(goal, base, arm, previous);
  out.mode = Mode::Cooperation;
  out.p_B_d = goal.p - base_rotation(EulerAngles::from(base.phi)) * p_C;
  return out;
}

Vec3 workspace_center(const ArmModel& arm, std::size_t n, std::uint64_t seed) {
  return kde_mode(sample_workspace(arm, n, seed));
}

}  // namespace aeromanip
