#include "aeromanip/plant.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/LU>

namespace aeromanip {
namespace {

using Vec11 = Eigen::Matrix<double, 11, 1>;
using Mat11 = Eigen::Matrix<double, 11, 11>;
using Vec22 = Eigen::Matrix<double, 22, 1>;

void check_gimbal(const Vec3& phi) {
  if (std::abs(phi.y()) > std::numbers::pi / 2 - kGimbalMargin) {
    throw GimbalProximity("pitch " + std::to_string(phi.y()) + " rad is within " +
                          std::to_string(kGimbalMargin) + " rad of the Euler singularity");
  }
}

struct Residual {
  Vec11 r;
  Wrench coupling;
};

// Newton-Euler residuals of base translation, base rotation and the joints for
// trial accelerations x = (v_dot, omega_dot, qdd).
Residual residual(const FullState& s, const Mat3& R, const ActuatorCommand& cmd,
                  const Wrench& dist, const SystemModel& m, const Vec11& x) {
  const double g = m.gravity;
  const Vec3 e3 = Vec3::UnitZ();
  BaseMotion base{R, x.head<3>(), s.omega, x.segment<3>(3)};
  const RneResult arm = rne(m.arm, base, s.q, s.qd, x.tail<5>(), g);

  const Mat3& I = m.quad.inertia;
  Residual out;
  out.coupling = arm.coupling;
  out.r.head<3>() = m.quad.mass * x.head<3>() -
                    (-cmd.thrust * R * e3 + m.total_mass() * g * e3 + arm.coupling.force +
                     dist.force);
  out.r.segment<3>(3) = I * x.segment<3>(3) -
                        (cmd.torque + arm.coupling.torque + dist.torque -
                         s.omega.cross(I * s.omega));
  out.r.tail<5>() = arm.tau - cmd.joint_torque;
  return out;
}

Vec22 pack(const FullState& s) {
  Vec22 x;
  x << s.p, s.v, s.phi, s.omega, s.q, s.qd;
  return x;
}

FullState unpack(const Vec22& x, double t) {
  FullState s;
  s.p = x.segment<3>(0);
  s.v = x.segment<3>(3);
  s.phi = x.segment<3>(6);
  s.omega = x.segment<3>(9);
  s.q = x.segment<5>(12);
  s.qd = x.segment<5>(17);
  s.t = t;
  return s;
}

Vec22 pack(const StateDerivative& d) {
  Vec22 x;
  x << d.p_dot, d.v_dot, d.phi_dot, d.omega_dot, d.q_dot, d.qdd;
  return x;
}

}  // namespace

StateDerivative derivative(const FullState& s, const ActuatorCommand& cmd, const Wrench& dist,
                           const SystemModel& model) {
  check_gimbal(s.phi);
  if (!(cmd.thrust >= 0.0)) throw InvariantViolation("thrust must be nonnegative");
  const EulerAngles eul = EulerAngles::from(s.phi);
  const Mat3 R = base_rotation(eul);

  // The residual is affine in the accelerations, so columns of the system
  // matrix are differences against the zero-acceleration residual.
  const Residual r0 = residual(s, R, cmd, dist, model, Vec11::Zero());
  Mat11 A;
  for (int j = 0; j < 11; ++j) {
    A.col(j) = residual(s, R, cmd, dist, model, Vec11::Unit(j)).r - r0.r;
  }
  const Vec11 x = A.partialPivLu().solve(-r0.r);
  const Residual rx = residual(s, R, cmd, dist, model, x);
  const double scale = 1.0 + r0.r.norm();
  if (!(rx.r.norm() <= 1e-9 * scale)) {
    throw ConvergenceError("coupled dynamics solve left residual " + std::to_string(rx.r.norm()));
  }

  StateDerivative d;
  d.p_dot = s.v;
  d.v_dot = x.head<3>();
  d.phi_dot = euler_rate_matrix_inverse(eul) * s.omega;
  d.omega_dot = x.segment<3>(3);
  d.q_dot = s.qd;
  d.qdd = x.tail<5>();
  d.coupling = rx.coupling;
  return d;
}

FullState step(const FullState& s, const ActuatorCommand& cmd, const Wrench& dist,
               const SystemModel& model, double dt, StateDerivative* at_start) {
  if (!(dt > 0.0)) throw Error("step: dt must be positive");
  auto f = [&](const Vec22& x, double t) {
    return pack(derivative(unpack(x, t), cmd, dist, model));
  };
  const Vec22 x0 = pack(s);
  const StateDerivative d0 = derivative(s, cmd, dist, model);
  if (at_start) *at_start = d0;
  const Vec22 k1 = pack(d0);
  const Vec22 k2 = f(x0 + 0.5 * dt * k1, s.t + 0.5 * dt);
  const Vec22 k3 = f(x0 + 0.5 * dt * k2, s.t + 0.5 * dt);
  const Vec22 k4 = f(x0 + dt * k3, s.t + dt);
  FullState out = unpack(x0 + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4), s.t + dt);
  check_gimbal(out.phi);
  return out;
}

double total_energy(const FullState& s, const SystemModel& model) {
  const Mat3 R = base_rotation(EulerAngles::from(s.phi));
  const BaseVelocity base{R, s.p, s.v, s.omega};
  const double g = model.gravity;
  const double base_kinetic =
      0.5 * model.quad.mass * s.v.squaredNorm() + 0.5 * s.omega.dot(model.quad.inertia * s.omega);
  const double base_potential = -model.quad.mass * g * s.p.z();
  return base_kinetic + base_potential + arm_kinetic_energy(model.arm, base, s.q, s.qd) +
         arm_potential_energy(model.arm, base, s.q, g);
}

double input_power(const FullState& s, const ActuatorCommand& cmd, const Wrench& dist) {
  const Mat3 R = base_rotation(EulerAngles::from(s.phi));
  const Vec3 thrust = -cmd.thrust * R.col(2);
  return (thrust + dist.force).dot(s.v) + (cmd.torque + dist.torque).dot(s.omega) +
         cmd.joint_torque.dot(s.qd);
}

NoiseConfig NoiseConfig::gaussian() {
  NoiseConfig c;
  c.accel_std = 2e-2;
  c.omega_dot_std = 1e-2;
  c.qdd_std = 1e-2;
  return c;
}

NoiseConfig NoiseConfig::uniform() {
  NoiseConfig c = gaussian();
  c.position_uniform = 0.02;
  c.attitude_uniform = 5.0 * std::numbers::pi / 180.0;
  return c;
}

NoiseConfig NoiseConfig::none() { return NoiseConfig{}; }

Sensors::Sensors(const NoiseConfig& cfg, std::uint64_t seed) : cfg_(cfg), rng_(seed) {}

bool Sensors::due(double t, double rate, long& tick) const {
  // Tick k is due at k / rate; a small tolerance absorbs accumulated dt error.
  if (t + 1e-9 < static_cast<double>(tick) / rate) return false;
  tick = static_cast<long>(std::floor(t * rate + 1e-9)) + 1;
  return true;
}

std::optional<SensorSample> Sensors::measure(const FullState& s, const Accelerations& acc,
                                             double t) {
  const bool pos = due(t, cfg_.position_rate, position_tick_);
  const bool att = due(t, cfg_.attitude_rate, attitude_tick_);
  if (!pos && !att) return std::nullopt;

  auto uniform3 = [this](double half) {
    if (half <= 0.0) return Vec3(Vec3::Zero());
    std::uniform_real_distribution<double> u(-half, half);
    const double a = u(rng_);
    const double b = u(rng_);
    return Vec3(a, b, u(rng_));
  };
  auto gauss = [this](double sigma) {
    if (sigma <= 0.0) return 0.0;
    std::normal_distribution<double> n(0.0, sigma);
    return n(rng_);
  };

  held_.t = t;
  if (pos) {
    held_.t_position = t;
    held_.p = s.p + uniform3(cfg_.position_uniform);
    held_.v = s.v;
  }
  if (att) {
    held_.t_attitude = t;
    held_.phi = s.phi + uniform3(cfg_.attitude_uniform);
    held_.omega = s.omega;
    held_.q = s.q;
    held_.qd = s.qd;
    for (int i = 0; i < 3; ++i) held_.accel.v_dot[i] = acc.v_dot[i] + gauss(cfg_.accel_std);
    for (int i = 0; i < 3; ++i) {
      held_.accel.omega_dot[i] = acc.omega_dot[i] + gauss(cfg_.omega_dot_std);
    }
    for (int i = 0; i < kNumJoints; ++i) held_.accel.qdd[i] = acc.qdd[i] + gauss(cfg_.qdd_std);
  }
  return held_;
}

}  // namespace aeromanip
