#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "aeromanip/model.hpp"
#include "aeromanip/rne.hpp"
#include "aeromanip/spatial.hpp"

namespace aeromanip {

struct FullState {
  Vec3 p = Vec3::Zero();      ///< base position, inertial NED (m)
  Vec3 v = Vec3::Zero();      ///< base velocity, inertial (m/s)
  Vec3 phi = Vec3::Zero();    ///< roll, pitch, yaw (rad)
  Vec3 omega = Vec3::Zero();  ///< body angular velocity (rad/s)
  Vec5 q = Vec5::Zero();
  Vec5 qd = Vec5::Zero();
  double t = 0.0;
};

struct ActuatorCommand {
  double thrust = 0.0;            ///< N, along -z_B
  Vec3 torque = Vec3::Zero();     ///< body frame (N m)
  Vec5 joint_torque = Vec5::Zero();
};

struct Accelerations {
  Vec3 v_dot = Vec3::Zero();      ///< inertial
  Vec3 omega_dot = Vec3::Zero();  ///< body
  Vec5 qdd = Vec5::Zero();
};

struct StateDerivative {
  Vec3 p_dot, v_dot, phi_dot, omega_dot;
  Vec5 q_dot, qdd;
  Wrench coupling;  ///< true (f_D, tau_D^B) at the solved accelerations

  Accelerations accelerations() const { return {v_dot, omega_dot, qdd}; }
};

/// Pitch margin below pi/2 at which the simulation aborts.
inline constexpr double kGimbalMargin = 1e-3;

/// Coupled base-arm dynamics. The base, the five joint equations and the RNE
/// coupling wrench are solved simultaneously as one linear system in
/// (v_dot, omega_dot, qdd). `dist` is an external wrench on the base
/// (force inertial, torque body).
StateDerivative derivative(const FullState& s, const ActuatorCommand& cmd, const Wrench& dist,
                           const SystemModel& model);

/// One explicit RK4 step with the command and disturbance held constant.
/// When `at_start` is given it receives the derivative at the initial state.
FullState step(const FullState& s, const ActuatorCommand& cmd, const Wrench& dist,
               const SystemModel& model, double dt, StateDerivative* at_start = nullptr);

/// Kinetic plus potential energy of the whole system (J).
double total_energy(const FullState& s, const SystemModel& model);

/// Power delivered by actuators and the external wrench (W).
double input_power(const FullState& s, const ActuatorCommand& cmd, const Wrench& dist);

struct NoiseConfig {
  double position_rate = 100.0;  ///< Hz, position and linear velocity
  double attitude_rate = 200.0;  ///< Hz, attitude, angular velocity, joints, accelerations
  double accel_std = 0.0;        ///< m/s^2
  double omega_dot_std = 0.0;    ///< rad/s^2
  double qdd_std = 0.0;          ///< rad/s^2
  double position_uniform = 0.0; ///< half-width (m)
  double attitude_uniform = 0.0; ///< half-width (rad)

  /// Gaussian acceleration noise only.
  static NoiseConfig gaussian();
  /// Gaussian acceleration noise plus uniform position/attitude noise.
  static NoiseConfig uniform();
  static NoiseConfig none();
};

struct SensorSample {
  double t = 0.0;
  double t_position = 0.0;
  double t_attitude = 0.0;
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Vec3 phi = Vec3::Zero();
  Vec3 omega = Vec3::Zero();
  Vec5 q = Vec5::Zero();
  Vec5 qd = Vec5::Zero();
  Accelerations accel;
};

/// Rate-gated noisy sensing with zero-order hold between ticks.
class Sensors {
 public:
  Sensors(const NoiseConfig& cfg, std::uint64_t seed);

  /// Returns a sample when at least one channel is due at time t, otherwise
  /// nothing. Channels that are not due keep their previous values.
  std::optional<SensorSample> measure(const FullState& s, const Accelerations& acc, double t);

  const SensorSample& held() const { return held_; }

 private:
  bool due(double t, double rate, long& tick) const;

  NoiseConfig cfg_;
  std::mt19937_64 rng_;
  SensorSample held_;
  long position_tick_ = 0;
  long attitude_tick_ = 0;
};

}  // namespace aeromanip
