#pragma once

#include <Eigen/Dense>
#include <utility>

#include "aeromanip/model.hpp"
#include "aeromanip/rne.hpp"
#include "aeromanip/spatial.hpp"

namespace aeromanip {

struct Gains {
  Mat3 Kp = 2.2 * Mat3::Identity();
  Mat3 Kv = 2.0 * Mat3::Identity();
  Mat3 Kphi = 24.0 * Mat3::Identity();
  Mat3 Komega = 16.0 * Mat3::Identity();
  Mat5 KMp = 100.0 * Mat5::Identity();
  Mat5 KMv = 100.0 * Mat5::Identity();

  /// Throws ConfigError unless every matrix is diagonal with positive entries.
  void validate() const;
};

/// Backward difference followed by a first-order low-pass filter.
class FilteredDifferentiator {
 public:
  FilteredDifferentiator(double time_constant, double dt) : tau_(time_constant), dt_(dt) {}

  /// Derivative estimate after feeding the next sample. The first call
  /// returns zero.
  Eigen::VectorXd update(const Eigen::VectorXd& x);
  void reset() { initialized_ = false; }

 private:
  double tau_;
  double dt_;
  bool initialized_ = false;
  Eigen::VectorXd previous_;
  Eigen::VectorXd filtered_;
};

/// First-order low-pass filter; a zero time constant passes the input through.
class LowPassFilter {
 public:
  LowPassFilter(double time_constant, double dt) : alpha_(dt / (time_constant + dt)) {}

  Eigen::VectorXd update(const Eigen::VectorXd& x);

 private:
  double alpha_;
  bool initialized_ = false;
  Eigen::VectorXd state_;
};

/// Complementary pose filter: integrates the measured velocity and body rate
/// and pulls toward the noisy position and attitude samples with time
/// constant tau. tau = 0 passes the samples through.
class PoseFilter {
 public:
  PoseFilter(double time_constant, double dt) : tau_(time_constant), dt_(dt) {}

  /// Feeds the held sample; returns the filtered position and Euler angles.
  std::pair<Vec3, Vec3> update(const Vec3& p, const Vec3& v, const Vec3& phi, const Vec3& omega);

 private:
  double tau_;
  double dt_;
  bool initialized_ = false;
  Vec3 p_ = Vec3::Zero();
  Vec3 phi_ = Vec3::Zero();
};

/// RNE coupling wrench from measured signals; zero when `ablate` is set.
Wrench estimate_coupling(const ArmModel& arm, const BaseMotion& measured, const Vec5& q,
                         const Vec5& qd, const Vec5& qdd, double gravity, bool ablate = false);

/// v_B,r = p_dot_B,d - K_p p~_B.
Vec3 velocity_reference(const Vec3& p_dot_d, const Vec3& p_err, const Gains& gains);

/// Desired thrust vector f = m_S (g e3 - v_dot_r + K_v v~ + p~) + f_D_hat,
/// so that -f cancels gravity, the tracking terms and the estimated coupling
/// in the base dynamics.
Vec3 position_control(const Vec3& p_err, const Vec3& v_err, const Vec3& v_dot_r,
                      const Vec3& f_hat, const Gains& gains, double m_S, double gravity);

struct ThrustAttitude {
  double thrust = 0.0;
  double roll = 0.0;
  double pitch = 0.0;
  bool clamped = false;  ///< asin argument was outside [-1, 1] and clamped
};

/// Thrust magnitude and roll/pitch commands for a thrust vector and yaw.
/// Throws DegenerateThrust for |f| <= 1e-6 N and AsinDomain when the asin
/// argument leaves [-1, 1] (unless `clamp`).
ThrustAttitude thrust_attitude_extract(const Vec3& f, double psi_d, bool clamp = false);

/// Rate of v_B,r with the error rate taken from the measured velocity:
/// p_ddot_B,d - K_p (v_B - p_dot_B,d). Avoids differentiating position noise.
Vec3 velocity_reference_rate(const Vec3& p_ddot_d, const Vec3& p_dot_d, const Vec3& v,
                             const Gains& gains);

/// omega_B,r = Q (Phi_dot_d - K_Phi Phi~).
Vec3 angular_velocity_reference(const EulerAngles& phi, const Vec3& phi_dot_d,
                                const Vec3& phi_err, const Gains& gains);

/// Rate of omega_B,r with the attitude-error rate taken from the measured body
/// rate: Q_dot u + Q (Phi_ddot_d - K_Phi (Q^{-1} omega - Phi_dot_d)),
/// u = Phi_dot_d - K_Phi Phi~.
Vec3 angular_velocity_reference_rate(const EulerAngles& phi, const Vec3& omega,
                                     const Vec3& phi_dot_d, const Vec3& phi_ddot_d,
                                     const Vec3& phi_err, const Gains& gains);

/// tau_B = omega x I omega + I (omega_dot_r - K_omega omega~ - Q^-1 Phi~) - tau_D_hat.
/// Throws GimbalProximity via Q^-1.
Vec3 attitude_control(const Vec3& phi_err, const Vec3& omega_err, const Vec3& omega_dot_r,
                      const Vec3& omega, const Vec3& tau_hat, const Gains& gains,
                      const Mat3& I_B, const EulerAngles& phi);

/// tau_M = M(q) (qdd_d - K_Mv qd~ - K_Mp q~) + C(base, q, qd).
Vec5 computed_torque(const ArmModel& arm, const BaseMotion& base, const Vec5& q_err,
                     const Vec5& qd_err, const Vec5& qdd_d, const Vec5& q, const Vec5& qd,
                     const Gains& gains, double gravity);

/// Componentwise wrapped difference of two angle triples.
Vec3 angle_error(const Vec3& actual, const Vec3& desired);

}  // namespace aeromanip
