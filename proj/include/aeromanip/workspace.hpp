#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "aeromanip/kinematics.hpp"

namespace aeromanip {

using PointCloud = std::vector<Vec3>;

/// End-effector positions (body frame) for `n` joint samples drawn uniformly
/// within the joint limits. Deterministic for a given seed.
PointCloud sample_workspace(const ArmModel& arm, std::size_t n, std::uint64_t seed);

/// Scott's rule n^(-1/7) * sigma per axis, combined by geometric mean.
double scott_bandwidth(const PointCloud& points);

/// Gaussian kernel density estimate (1/m^3). `bandwidth` defaults to Scott's rule.
double kde_density(const PointCloud& points, const Vec3& query,
                   std::optional<double> bandwidth = std::nullopt);

/// Highest-density point of the estimate, found by mean-shift from the densest
/// cloud samples.
Vec3 kde_mode(const PointCloud& points, std::optional<double> bandwidth = std::nullopt);

enum class AmplificationMode { Both, AttitudeOnly };

struct SampleStats {
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<double> samples;

  static SampleStats from(std::vector<double> samples);
};

struct ErrorStats {
  SampleStats base_position;      ///< ||e_B,p|| (m)
  SampleStats ee_position;        ///< ||e_E,p|| (m)
  SampleStats base_attitude;      ///< ||Phi_B - Phi_B,d|| (rad)
  SampleStats ee_attitude;        ///< ||log(E_E,a)|| (rad)

  double position_mean_ratio() const { return ee_position.mean / base_position.mean; }
  double position_std_ratio() const { return ee_position.stddev / base_position.stddev; }
};

struct AmplificationOptions {
  double position_range = 0.02;         ///< half-width of the base position error (m)
  double attitude_range = 5.0 * 3.14159265358979323846 / 180.0;  ///< half-width (rad)
  double roll_pitch_range = 15.0 * 3.14159265358979323846 / 180.0;  ///< desired attitude
  std::size_t samples = 1000;
  AmplificationMode mode = AmplificationMode::Both;
  std::uint64_t seed = 1;
};

/// Monte Carlo of how base pose errors reach the end-effector:
/// e_E,p = e_B,p + (R_B - R_B,d) p_E^B and E_E,a = R_E^B' R_B,d' R_B R_E^B.
/// In attitude-only mode e_B,p is still drawn (it is the reference
/// distribution) but does not enter e_E,p.
ErrorStats error_amplification_mc(const ArmModel& arm, const AmplificationOptions& opts);

/// Test grid over the solid hemisphere of `radius` below the mount: half of
/// the points on the spherical surface, half spread through the volume.
PointCloud hemisphere_grid(const ArmModel& arm, double radius, int n);

/// True when some tool direction admits a feasible IK solution at `p_EB`.
bool reachable_any_attitude(const ArmModel& arm, const Vec3& p_EB);

/// Fraction of hemisphere_grid points that are reachable.
double hemisphere_coverage(const ArmModel& arm, double radius, int n = 200);

}  // namespace aeromanip
