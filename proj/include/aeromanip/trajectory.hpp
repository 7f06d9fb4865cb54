#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "aeromanip/coordination.hpp"

namespace aeromanip {

enum class TrajectoryKind { Fixed, Circle, Lemniscate, Waypoints };

TrajectoryKind parse_trajectory_kind(const std::string& s);
const char* trajectory_kind_name(TrajectoryKind k);

struct Waypoint {
  double t = 0.0;
  Vec3 p = Vec3::Zero();
};

/// Reads a CSV with header `t,x,y,z` and strictly increasing times.
std::vector<Waypoint> load_waypoints(const std::filesystem::path& path);

struct TrajectorySpec {
  TrajectoryKind kind = TrajectoryKind::Fixed;
  Vec3 center = Vec3::Zero();  ///< inertial frame (m)
  double radius = 0.12;        ///< circle (m)
  double omega = 1.0;          ///< rad/s
  double amp_x = 0.6;          ///< lemniscate x amplitude (m)
  double amp_z = 0.6;          ///< lemniscate z amplitude (m)
  std::vector<Waypoint> waypoints;  ///< offsets from `center`
  double alpha = 0.0;          ///< tool angles of the goal (rad)
  double beta = 0.0;
  bool feedforward = true;     ///< publish goal velocities
};

/// Goal at time t.
/// circle:     center + r (cos wt, 0, sin wt)
/// lemniscate: center + (A sin wt, 0, B sin wt cos wt)
/// waypoints:  center + piecewise-linear path, held after the last point
EndEffectorGoal trajectory(const TrajectorySpec& spec, double t);

}  // namespace aeromanip
