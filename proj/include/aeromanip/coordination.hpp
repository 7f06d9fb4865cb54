#pragma once

#include <cstdint>

#include "aeromanip/kinematics.hpp"

namespace aeromanip {

enum class Mode { Hover, Cooperation };

const char* mode_name(Mode m);
Mode parse_mode(const std::string& s);

/// End-effector goal in the inertial frame. Rates default to zero.
struct EndEffectorGoal {
  Vec3 p = Vec3::Zero();
  Vec3 p_dot = Vec3::Zero();
  double alpha = 0.0;
  double beta = 0.0;
  double alpha_dot = 0.0;
  double beta_dot = 0.0;
};

/// Base pose and rates as seen by the controller.
struct BaseState {
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Vec3 phi = Vec3::Zero();
  Vec3 omega = Vec3::Zero();  ///< body frame
};

struct CoordinationOutput {
  Mode mode = Mode::Hover;
  Vec3 p_B_d = Vec3::Zero();
  Vec3 p_EB_d = Vec3::Zero();  ///< end-effector goal in the body frame
  Vec5 q_d = Vec5::Zero();
  Vec5 qd_d = Vec5::Zero();
};

/// The base holds `hover_position`; the arm places the end-effector at the goal
/// from the current base pose. `previous` selects the nearest IK branch.
CoordinationOutput coordinate_hover(const EndEffectorGoal& goal, const BaseState& base,
                                    const ArmModel& arm, const Vec3& hover_position,
                                    const Vec5& previous);

/// The base carries the workspace center p_C^B along the goal:
/// p_B,d = p_E,d - R_B p_C^B. The arm then closes the remaining gap.
CoordinationOutput coordinate_cooperation(const EndEffectorGoal& goal, const BaseState& base,
                                          const ArmModel& arm, const Vec3& p_C,
                                          const Vec5& previous);

/// KDE mode of an `n`-sample workspace cloud (body frame).
Vec3 workspace_center(const ArmModel& arm, std::size_t n = 10000, std::uint64_t seed = 1);

}  // namespace aeromanip
