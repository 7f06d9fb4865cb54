#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "aeromanip/keyvalue.hpp"
#include "aeromanip/types.hpp"

namespace aeromanip {

/// Modified (Craig) Denavit-Hartenberg parameters of joint i:
/// T_{i-1,i} = Rx(alpha) Tx(a) Rz(theta_offset + q_i) Tz(d).
struct MdhParams {
  double a = 0.0;
  double alpha = 0.0;
  double d = 0.0;
  double theta_offset = 0.0;

  bool operator==(const MdhParams&) const = default;
};

struct Link {
  MdhParams mdh;
  double lower = 0.0;  ///< joint limit (rad)
  double upper = 0.0;
  double mass = 0.0;        ///< kg
  Vec3 com = Vec3::Zero();  ///< CoM in the link frame (m)
  Mat3 inertia = Mat3::Identity();  ///< about the CoM, link frame (kg m^2)

  bool operator==(const Link&) const = default;
};

/// Rigid 5-joint arm. The mount frame is placed at `mount_position` in the
/// body frame with orientation `mount_rotation`; the end-effector frame is a
/// fixed `tool_*` transform after frame 5.
struct ArmModel {
  std::array<Link, kNumJoints> links;
  Vec3 mount_position = Vec3::Zero();
  Mat3 mount_rotation = Mat3::Identity();
  Vec3 tool_position = Vec3::Zero();
  Mat3 tool_rotation = Mat3::Identity();

  double total_mass() const;
  /// Upper bound on the end-effector distance from the mount origin.
  double reach() const;
  Vec5 lower_limits() const;
  Vec5 upper_limits() const;

  bool operator==(const ArmModel&) const = default;
};

struct QuadModel {
  double mass = 0.0;
  Mat3 inertia = Mat3::Identity();
  double wheelbase = 0.0;

  bool operator==(const QuadModel&) const = default;
};

struct SystemModel {
  QuadModel quad;
  ArmModel arm;
  double gravity = 9.81;

  double arm_mass() const { return arm.total_mass(); }
  double total_mass() const { return quad.mass + arm.total_mass(); }

  bool operator==(const SystemModel&) const = default;
};

/// 4x4 homogeneous transform of one MDH joint.
Eigen::Matrix4d mdh_transform(const MdhParams& p, double q);

/// Every violated invariant, one human-readable line each. Empty when valid.
std::vector<std::string> check_invariants(const SystemModel& m);

SystemModel parse_model(const KeyValueFile& kv);
SystemModel load_model(const std::filesystem::path& path);
std::string model_to_string(const SystemModel& m);
void save_model(const SystemModel& m, const std::filesystem::path& path);

/// Arm with the reference joint layout (spherical shoulder, parallel elbow and
/// wrist pitch) built from five link lengths. Link masses are proportional to
/// length with a per-link floor; links are modeled as uniform solid rods.
ArmModel make_arm(const Vec5& lengths, double total_mass, double min_link_mass = 0.05,
                  double rod_radius = 0.02);

/// Quadcopter and arm parameters of the reference platform.
SystemModel make_reference_system(const Vec5& lengths);

struct SizingOptions {
  double step = 0.002;          ///< length moved per iteration (m)
  int max_iterations = 200;
  Vec5 min_lengths = (Vec5() << 0.0, 0.02, 0.02, 0.02, 0.02).finished();
  int grid_points = 200;
};

struct SizingResult {
  double total_length = 0.0;
  Vec5 lengths = Vec5::Zero();
  int iterations = 0;
  double coverage = 0.0;  ///< fraction of the hemisphere grid that is reachable
};

/// Body-to-arm ratio sizing: total length = body_length / ratio, first link zero and
/// the other four equal, then length moves from links 2-3 to links 4-5 until the
/// hemisphere of `target_radius` below the mount is fully reachable.
/// Throws ConvergenceError with the last coverage fraction on failure.
SizingResult size_arm(double body_length, double ratio, double target_radius,
                      const SizingOptions& opts = {});

}  // namespace aeromanip
