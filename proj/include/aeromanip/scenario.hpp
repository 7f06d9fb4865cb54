#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "aeromanip/control.hpp"
#include "aeromanip/coordination.hpp"
#include "aeromanip/plant.hpp"
#include "aeromanip/trajectory.hpp"

namespace aeromanip {

enum class NoiseKind { None, Gaussian, Uniform };
enum class DisturbanceKind { None, Sinusoid, Step };

struct DisturbanceSpec {
  DisturbanceKind kind = DisturbanceKind::None;
  int axis = 0;            ///< 0, 1, 2 for x, y, z (inertial)
  double amplitude = 0.0;  ///< N (sinusoid amplitude or step magnitude)
  double frequency = 1.0;  ///< rad/s
  double onset = 0.0;      ///< s

  Vec3 force(double t) const;
};

struct Scenario {
  std::string name;
  std::filesystem::path model_path;
  SystemModel model;
  Mode mode = Mode::Hover;
  TrajectorySpec trajectory;
  DisturbanceSpec disturbance;
  NoiseKind noise = NoiseKind::Gaussian;
  std::optional<double> position_noise;      ///< uniform half-range override (m)
  std::optional<double> attitude_noise_deg;  ///< uniform half-range override (deg)
  double duration = 10.0;
  double dt = 1e-3;
  std::uint64_t seed = 1;
  Gains gains;
  bool ablate_coupling = false;
  Vec3 base_position = Vec3::Zero();     ///< initial base position and hover setpoint
  std::optional<Vec3> workspace_center;  ///< cooperation posture p_C^B
  double settle_time = 1.0;
  int log_every = 10;                    ///< write every n-th control tick
  double derivative_tau = 0.02;          ///< low-pass time constant of reference derivatives
  double pose_filter_tau = 0.3;          ///< complementary pose filter (s); 0 = raw
  bool analytic_reference_rate = true;   ///< error rates from measured velocities
  double accel_filter_tau = 0.1;         ///< low-pass on measured accelerations (s)
  bool qdd_feedforward = false;
  double yaw = 0.0;                      ///< psi_d
  double position_rate = 100.0;          ///< Hz
  double attitude_rate = 200.0;          ///< Hz

  /// Every key of the source file, used to check that compared scenarios
  /// differ only in run flags.
  KeyValueFile source;

  NoiseConfig noise_config() const;
};

/// Relative paths (model, waypoint file) resolve against `base_dir`.
Scenario parse_scenario(const KeyValueFile& kv, const std::filesystem::path& base_dir);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace aeromanip
