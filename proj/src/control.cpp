#include "aeromanip/control.hpp"

#include <cmath>
#include <string>

namespace aeromanip {
namespace {

template <typename M>
void check_diagonal(const M& K, const char* name) {
  for (int i = 0; i < K.rows(); ++i) {
    for (int j = 0; j < K.cols(); ++j) {
      const double v = K(i, j);
      if (i == j && !(v > 0.0)) {
        throw ConfigError(std::string("gain ") + name + " has a nonpositive diagonal entry");
      }
      if (i != j && v != 0.0) {
        throw ConfigError(std::string("gain ") + name + " must be diagonal");
      }
    }
  }
}

}  // namespace

void Gains::validate() const {
  check_diagonal(Kp, "Kp");
  check_diagonal(Kv, "Kv");
  check_diagonal(Kphi, "Kphi");
  check_diagonal(Komega, "Komega");
  check_diagonal(KMp, "KMp");
  check_diagonal(KMv, "KMv");
}

Eigen::VectorXd FilteredDifferentiator::update(const Eigen::VectorXd& x) {
  if (!initialized_) {
    previous_ = x;
    filtered_ = Eigen::VectorXd::Zero(x.size());
    initialized_ = true;
    return filtered_;
  }
  const Eigen::VectorXd raw = (x - previous_) / dt_;
  previous_ = x;
  const double a = dt_ / (tau_ + dt_);
  filtered_ += a * (raw - filtered_);
  return filtered_;
}

Eigen::VectorXd LowPassFilter::update(const Eigen::VectorXd& x) {
  if (!initialized_) {
    state_ = x;
    initialized_ = true;
  } else {
    state_ += alpha_ * (x - state_);
  }
  return state_;
}

std::pair<Vec3, Vec3> PoseFilter::update(const Vec3& p, const Vec3& v, const Vec3& phi,
                                         const Vec3& omega) {
  if (!initialized_ || tau_ <= 0.0) {
    p_ = p;
    phi_ = phi;
    initialized_ = true;
    return {p_, phi_};
  }
  const double k = dt_ / (tau_ + dt_);
  p_ += dt_ * v;
  p_ += k * (p - p_);
  phi_ += dt_ * (euler_rate_matrix_inverse(EulerAngles::from(phi_)) * omega);
  phi_ += k * angle_error(phi, phi_);
  for (int i = 0; i < 3; ++i) phi_[i] = wrap_angle(phi_[i]);
  return {p_, phi_};
}

Wrench estimate_coupling(const ArmModel& arm, const BaseMotion& measured, const Vec5& q,
                         const Vec5& qd, const Vec5& qdd, double gravity, bool ablate) {
  if (ablate) return Wrench{};
  return rne_coupling(arm, measured, q, qd, qdd, gravity);
}

Vec3 velocity_reference(const Vec3& p_dot_d, const Vec3& p_err, const Gains& gains) {
  return p_dot_d - gains.Kp * p_err;
}

Vec3 velocity_reference_rate(const Vec3& p_ddot_d, const Vec3& p_dot_d, const Vec3& v,
                             const Gains& gains) {
  return p_ddot_d - gains.Kp * (v - p_dot_d);
}

Vec3 position_control(const Vec3& p_err, const Vec3& v_err, const Vec3& v_dot_r,
                      const Vec3& f_hat, const Gains& gains, double m_S, double gravity) {
  return m_S * (gravity * Vec3::UnitZ() - v_dot_r + gains.Kv * v_err + p_err) + f_hat;
}

ThrustAttitude thrust_attitude_extract(const Vec3& f, double psi_d, bool clamp) {
  ThrustAttitude out;
  out.thrust = f.norm();
  if (!(out.thrust > 1e-6)) throw DegenerateThrust("thrust vector is degenerate");
  const double s = std::sin(psi_d);
  const double c = std::cos(psi_d);
  double arg = (f.x() * s - f.y() * c) / out.thrust;
  if (std::abs(arg) > 1.0) {
    if (!clamp) throw AsinDomain("roll extraction argument " + std::to_string(arg));
    arg = std::clamp(arg, -1.0, 1.0);
    out.clamped = true;
  }
  out.roll = std::asin(arg);
  out.pitch = std::atan((f.x() * c + f.y() * s) / f.z());
  return out;
}

Vec3 angular_velocity_reference(const EulerAngles& phi, const Vec3& phi_dot_d,
                                const Vec3& phi_err, const Gains& gains) {
  return euler_rate_matrix(phi) * (phi_dot_d - gains.Kphi * phi_err);
}

Vec3 angular_velocity_reference_rate(const EulerAngles& phi, const Vec3& omega,
                                     const Vec3& phi_dot_d, const Vec3& phi_ddot_d,
                                     const Vec3& phi_err, const Gains& gains) {
  const Vec3 phi_dot = euler_rate_matrix_inverse(phi) * omega;
  const Vec3 u = phi_dot_d - gains.Kphi * phi_err;
  const Vec3 u_dot = phi_ddot_d - gains.Kphi * (phi_dot - phi_dot_d);
  return euler_rate_matrix_derivative(phi, phi_dot) * u + euler_rate_matrix(phi) * u_dot;
}

Vec3 attitude_control(const Vec3& phi_err, const Vec3& omega_err, const Vec3& omega_dot_r,
                      const Vec3& omega, const Vec3& tau_hat, const Gains& gains,
                      const Mat3& I_B, const EulerAngles& phi) {
  const Mat3 Qinv = euler_rate_matrix_inverse(phi);
  return omega.cross(I_B * omega) +
         I_B * (omega_dot_r - gains.Komega * omega_err - Qinv * phi_err) - tau_hat;
}

Vec5 computed_torque(const ArmModel& arm, const BaseMotion& base, const Vec5& q_err,
                     const Vec5& qd_err, const Vec5& qdd_d, const Vec5& q, const Vec5& qd,
                     const Gains& gains, double gravity) {
  const Mat5 M = arm_inertia_matrix(arm, q);
  const Vec5 C = arm_bias(arm, base, q, qd, gravity);
  return M * (qdd_d - gains.KMv * qd_err - gains.KMp * q_err) + C;
}

Vec3 angle_error(const Vec3& actual, const Vec3& desired) {
  return {wrap_angle(actual.x() - desired.x()), wrap_angle(actual.y() - desired.y()),
          wrap_angle(actual.z() - desired.z())};
}

}  // namespace aeromanip
