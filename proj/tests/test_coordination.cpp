#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <random>

#include "aeromanip/coordination.hpp"

using namespace aeromanip;

namespace {

const ArmModel& arm() {
  static const SystemModel m = [] {
    const char* env = std::getenv("AEROMANIP_TEST_DATA");
    const std::filesystem::path dir = env ? env : AEROMANIP_SOURCE_DIR;
    return load_model(dir / "configs" / "reference_model.cfg");
  }();
  return m.arm;
}

// A comfortable posture: elbow bent, level tool at (0, 0.25, 0.3) below the body.
const Vec3 kGoal(0.0, 0.25, 0.3);

EndEffectorGoal level_goal(const Vec3& p) {
  EndEffectorGoal g;
  g.p = p;
  return g;
}

}  // namespace

TEST(Coordination, ModeNames) {
  EXPECT_EQ(parse_mode("hover"), Mode::Hover);
  EXPECT_EQ(parse_mode("cooperation"), Mode::Cooperation);
  EXPECT_STREQ(mode_name(Mode::Cooperation), "cooperation");
  EXPECT_THROW(parse_mode("orbit"), ConfigError);
}

TEST(Coordination, HoverReproducesAKnownConfiguration) {
  const Vec5 q_star(0.3, 1.1, -0.2, 0.9, -0.4);
  const ChainPose pose = forward_kinematics(arm(), q_star);
  EndEffectorGoal goal;
  goal.p = pose.ee_position();
  const Eigen::Vector2d ab = tool_angles(pose.ee_rotation());
  goal.alpha = ab[0];
  goal.beta = ab[1];
  const CoordinationOutput out = coordinate_hover(goal, BaseState{}, arm(), Vec3::Zero(), q_star);
  EXPECT_EQ(out.mode, Mode::Hover);
  EXPECT_LT((out.q_d - q_star).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT((forward_kinematics(arm(), out.q_d).ee_position() - goal.p).norm(), 1e-10);
}

TEST(Coordination, StillBaseAndStillGoalGiveZeroJointRate) {
  const CoordinationOutput out =
      coordinate_hover(level_goal(kGoal), BaseState{}, arm(), Vec3::Zero(), Vec5::Zero());
  EXPECT_TRUE(out.qd_d.isZero(1e-12));
  EXPECT_TRUE(within_limits(arm(), out.q_d));
}

TEST(Coordination, HoverAbsorbsBaseDisplacement) {
  const CoordinationOutput at_rest =
      coordinate_hover(level_goal(kGoal), BaseState{}, arm(), Vec3::Zero(), Vec5::Zero());
  BaseState moved;
  moved.p = Vec3(0.01, 0.0, 0.0);
  const CoordinationOutput shifted =
      coordinate_hover(level_goal(kGoal), moved, arm(), Vec3::Zero(), at_rest.q_d);
  EXPECT_LT((shifted.p_EB_d - (at_rest.p_EB_d - Vec3(0.01, 0, 0))).norm(), 1e-15);
  EXPECT_EQ(shifted.p_B_d, Vec3::Zero());
}

TEST(Coordination, ErrorCompensationIdentity) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> pos(-0.03, 0.03), ang(-0.1, 0.1);
  for (int k = 0; k < 500; ++k) {
    BaseState b;
    b.p = Vec3(pos(rng), pos(rng), pos(rng));
    b.phi = Vec3(ang(rng), ang(rng), ang(rng));
    const CoordinationOutput out =
        coordinate_hover(level_goal(kGoal), b, arm(), Vec3::Zero(), Vec5::Zero());
    const Mat3 R_B = base_rotation(EulerAngles::from(b.phi));
    EXPECT_LT((b.p + R_B * out.p_EB_d - kGoal).norm(), 1e-14);
    // And the arm realises it, tool level in the world.
    const ChainPose pose = forward_kinematics(arm(), out.q_d);
    EXPECT_LT((b.p + R_B * pose.ee_position() - kGoal).norm(), 1e-9);
    EXPECT_LT((R_B * pose.ee_rotation().col(2) - Vec3::UnitZ()).norm(), 1e-9);
  }
}

TEST(Coordination, JointRateCancelsBaseMotionAndFollowsGoalRate) {
  BaseState b;
  b.phi = Vec3(0.05, -0.03, 0.2);
  b.v = Vec3(0.1, -0.05, 0.02);
  b.omega = Vec3(0.2, -0.1, 0.3);
  EndEffectorGoal goal = level_goal(kGoal);
  goal.p_dot = Vec3(0.0, 0.05, -0.02);
  const CoordinationOutput out = coordinate_hover(goal, b, arm(), Vec3::Zero(), Vec5::Zero());
  const Mat3 R_B = base_rotation(EulerAngles::from(b.phi));
  const JacobianStack J = jacobians(arm(), out.q_d, R_B, 0.0, 0.0);
  Vec6 eta_B;
  eta_B << b.v, R_B * b.omega;
  Vec5 eta_E;
  eta_E << goal.p_dot, 0.0, 0.0;
  EXPECT_LT((J.JB * eta_B + J.Jq * out.qd_d - eta_E).norm(), 1e-10);
}

TEST(Coordination, CooperationBaseSetpoint) {
  // Arithmetic of p_B,d = p_E,d - R_B p_C with a level base.
  const Vec3 p_C(0.0, 0.0, 0.35);
  EndEffectorGoal goal;
  goal.p = Vec3(1, 2, 3);
  BaseState b;
  b.p = Vec3(1.0, 1.75, 2.7);  // goal at (0, 0.25, 0.3) in the body frame
  const CoordinationOutput out = coordinate_cooperation(goal, b, arm(), p_C, Vec5::Zero());
  EXPECT_EQ(out.mode, Mode::Cooperation);
  EXPECT_LT((out.p_B_d - Vec3(1, 2, 2.65)).norm(), 1e-15);
}

TEST(Coordination, CooperationAtTheSetpointPutsTheArmAtTheCenter) {
  const Vec3 p_C(0.05, 0.1, 0.425);
  EndEffectorGoal goal;
  goal.p = Vec3(0.4, -0.2, -1.0);
  BaseState b;
  b.phi = Vec3(0.0, 0.0, 0.5);
  b.p = goal.p - base_rotation(EulerAngles::from(b.phi)) * p_C;
  const CoordinationOutput out = coordinate_cooperation(goal, b, arm(), p_C, Vec5::Zero());
  EXPECT_LT((out.p_B_d - b.p).norm(), 1e-14);
  EXPECT_LT((out.p_EB_d - p_C).norm(), 1e-14);
  EXPECT_LT((forward_kinematics(arm(), out.q_d).ee_position() - p_C).norm(), 1e-9);
}

TEST(Coordination, ErrorsPropagate) {
  BaseState far;
  far.p = Vec3(0.0, 0.0, -1.0);
  EXPECT_THROW(coordinate_hover(level_goal(kGoal), far, arm(), Vec3::Zero(), Vec5::Zero()),
               Unreachable);
  EXPECT_THROW(coordinate_cooperation(level_goal(kGoal), far, arm(), Vec3(0, 0, 0.3), Vec5::Zero()),
               Unreachable);
}

TEST(Coordination, WorkspaceCenterIsDeterministic) {
  const Vec3 a = workspace_center(arm(), 4000, 3);
  const Vec3 b = workspace_center(arm(), 4000, 3);
  EXPECT_EQ(a, b);
  EXPECT_LT(a.norm(), arm().reach());
}
