#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <random>

#include "aeromanip/control.hpp"

using namespace aeromanip;

namespace {

constexpr double kPi = std::numbers::pi;

const SystemModel& reference() {
  static const SystemModel m = [] {
    const char* env = std::getenv("AEROMANIP_TEST_DATA");
    const std::filesystem::path dir = env ? env : AEROMANIP_SOURCE_DIR;
    return load_model(dir / "configs" / "reference_model.cfg");
  }();
  return m;
}

Eigen::VectorXd scalar(double x) { return Eigen::VectorXd::Constant(1, x); }

}  // namespace

TEST(Gains, ValidateRequiresPositiveDiagonals) {
  Gains g;
  EXPECT_NO_THROW(g.validate());
  g.Kp(0, 1) = 0.1;
  EXPECT_THROW(g.validate(), ConfigError);
  g = Gains{};
  g.KMv(3, 3) = 0.0;
  EXPECT_THROW(g.validate(), ConfigError);
  g = Gains{};
  g.Komega(2, 2) = -1.0;
  EXPECT_THROW(g.validate(), ConfigError);
}

TEST(Filters, DifferentiatorFirstCallIsZeroAndRampConverges) {
  FilteredDifferentiator d(0.02, 1e-3);
  EXPECT_DOUBLE_EQ(d.update(scalar(5.0))[0], 0.0);
  double out = 0.0;
  for (int k = 1; k <= 300; ++k) out = d.update(scalar(5.0 + 2.0 * k * 1e-3))[0];
  EXPECT_NEAR(out, 2.0, 1e-5);
  d.reset();
  EXPECT_DOUBLE_EQ(d.update(scalar(1.0))[0], 0.0);
}

TEST(Filters, DifferentiatorLagMatchesFirstOrderResponse) {
  // Step in slope from 0 to 1 at k = 1: after n samples the output is
  // 1 - (1 - a)^n with a = dt / (tau + dt).
  const double tau = 0.02, dt = 1e-3, a = dt / (tau + dt);
  FilteredDifferentiator d(tau, dt);
  d.update(scalar(0.0));
  double out = 0.0;
  for (int n = 1; n <= 20; ++n) out = d.update(scalar(n * dt))[0];
  EXPECT_NEAR(out, 1.0 - std::pow(1.0 - a, 20), 1e-12);
}

TEST(Filters, LowPassStepResponse) {
  const double tau = 0.1, dt = 1e-3, a = dt / (tau + dt);
  LowPassFilter f(tau, dt);
  EXPECT_DOUBLE_EQ(f.update(scalar(0.0))[0], 0.0);
  double out = 0.0;
  for (int n = 1; n <= 100; ++n) out = f.update(scalar(1.0))[0];
  EXPECT_NEAR(out, 1.0 - std::pow(1.0 - a, 100), 1e-12);

  LowPassFilter pass(0.0, dt);
  pass.update(scalar(3.0));
  EXPECT_DOUBLE_EQ(pass.update(scalar(-7.0))[0], -7.0);
}

TEST(Filters, PoseFilterPassesThroughWhenDisabled) {
  PoseFilter f(0.0, 1e-3);
  const auto [p, phi] = f.update(Vec3(1, 2, 3), Vec3(5, 5, 5), Vec3(0.1, 0.2, 0.3), Vec3::Ones());
  EXPECT_EQ(p, Vec3(1, 2, 3));
  EXPECT_EQ(phi, Vec3(0.1, 0.2, 0.3));
}

TEST(Filters, PoseFilterTracksMotionAndRejectsNoise) {
  const double dt = 1e-3;
  PoseFilter f(0.3, dt);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> pos_noise(-0.02, 0.02), att_noise(-0.087, 0.087);
  const Vec3 v(0.1, -0.05, 0.02);
  const Vec3 omega(0.0, 0.0, 0.2);  // yaw rate only, level attitude
  double worst_p = 0.0, worst_a = 0.0;
  for (int k = 0; k < 5000; ++k) {
    const double t = k * dt;
    const Vec3 p_true = v * t;
    const Vec3 phi_true(0.0, 0.0, wrap_angle(0.2 * t));
    const Vec3 noise_p(pos_noise(rng), pos_noise(rng), pos_noise(rng));
    const Vec3 noise_a(att_noise(rng), att_noise(rng), att_noise(rng));
    const auto [p, phi] = f.update(p_true + noise_p, v, phi_true + noise_a, omega);
    if (t > 1.0) {
      worst_p = std::max(worst_p, (p - p_true).cwiseAbs().maxCoeff());
      worst_a = std::max(worst_a, angle_error(phi, phi_true).cwiseAbs().maxCoeff());
    }
  }
  // Well below the +-2 cm / +-5 deg input noise and without lag.
  EXPECT_LT(worst_p, 0.005);
  EXPECT_LT(worst_a, 0.02);
}

TEST(Control, VelocityReference) {
  Gains g;
  const Vec3 vr = velocity_reference(Vec3(0.1, 0, 0), Vec3(0.01, -0.02, 0.0), g);
  EXPECT_TRUE(vr.isApprox(Vec3(0.1 - 2.2 * 0.01, 2.2 * 0.02, 0.0), 1e-14));
}

TEST(Control, PositionControlYieldsTheErrorDynamics) {
  // m v_dot = m g e3 - f + f_D with f_D = f_hat gives
  // v_dot = v_dot_r - K_v v~ - p~.
  Gains g;
  const double m = 5.42, grav = 9.81;
  const Vec3 p_err(0.01, -0.02, 0.03), v_err(0.1, 0.0, -0.1), vdr(0.2, 0.1, 0.0);
  const Vec3 f_hat(0.3, -0.1, 0.2);
  const Vec3 f = position_control(p_err, v_err, vdr, f_hat, g, m, grav);
  const Vec3 v_dot = (m * grav * Vec3::UnitZ() - f + f_hat) / m;
  EXPECT_LT((v_dot - (vdr - g.Kv * v_err - p_err)).norm(), 1e-12);
  // Hover: f is the weight, pointing down in NED.
  EXPECT_TRUE(position_control(Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), g, m, grav)
                  .isApprox(Vec3(0, 0, m * grav), 1e-14));
}

TEST(Control, ThrustAttitudeRoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> tilt(-0.6, 0.6), yaw(-kPi, kPi), thrust(5.0, 80.0);
  for (int k = 0; k < 1000; ++k) {
    const double roll = tilt(rng), pitch = tilt(rng), psi = yaw(rng), T = thrust(rng);
    const Vec3 f = T * base_rotation({roll, pitch, psi}).col(2);
    const ThrustAttitude ta = thrust_attitude_extract(f, psi);
    EXPECT_NEAR(ta.thrust, T, 1e-10);
    EXPECT_NEAR(ta.roll, roll, 1e-10);
    EXPECT_NEAR(ta.pitch, pitch, 1e-10);
    EXPECT_FALSE(ta.clamped);
  }
  const ThrustAttitude hover = thrust_attitude_extract(Vec3(0, 0, 53.0), 0.4);
  EXPECT_DOUBLE_EQ(hover.thrust, 53.0);
  EXPECT_NEAR(hover.roll, 0.0, 1e-15);
  EXPECT_NEAR(hover.pitch, 0.0, 1e-15);
}

TEST(Control, ThrustAttitudeErrors) {
  EXPECT_THROW(thrust_attitude_extract(Vec3(0, 0, 1e-9), 0.0), DegenerateThrust);
  EXPECT_THROW(thrust_attitude_extract(Vec3::Zero(), 0.0), DegenerateThrust);
}

TEST(Control, AngularVelocityReference) {
  Gains g;
  const EulerAngles phi{0.1, -0.2, 0.3};
  const Vec3 rate(0.1, 0.0, -0.1), err(0.01, 0.02, -0.03);
  EXPECT_TRUE(angular_velocity_reference(phi, rate, err, g)
                  .isApprox(euler_rate_matrix(phi) * (rate - 24.0 * err), 1e-14));
}

TEST(Control, ReferenceRatesMatchFiniteDifferences) {
  Gains g;
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0.0, 0.3);
  auto v3 = [&] { return Vec3(n(rng), n(rng), n(rng)); };
  const double h = 1e-6;
  for (int k = 0; k < 200; ++k) {
    // Translation.
    const Vec3 p0 = v3(), v = v3(), pd0 = v3(), pd_dot = v3(), pd_ddot = v3();
    auto vr = [&](double t) {
      const Vec3 p = p0 + t * v;
      const Vec3 pd = pd0 + t * pd_dot + 0.5 * t * t * pd_ddot;
      return velocity_reference(pd_dot + t * pd_ddot, p - pd, g);
    };
    const Vec3 fd_v = (vr(h) - vr(-h)) / (2 * h);
    EXPECT_LT((velocity_reference_rate(pd_ddot, pd_dot, v, g) - fd_v).norm(), 1e-6);

    // Rotation: Phi evolves with the body rate omega through Q^-1.
    const Vec3 phi0 = v3(), omega = v3(), phid0 = v3(), phid_dot = v3(), phid_ddot = v3();
    const EulerAngles e0 = EulerAngles::from(phi0);
    const Vec3 phi_dot = euler_rate_matrix_inverse(e0) * omega;
    auto wr = [&](double t) {
      const Vec3 phi = phi0 + t * phi_dot;
      const Vec3 phid = phid0 + t * phid_dot + 0.5 * t * t * phid_ddot;
      return angular_velocity_reference(EulerAngles::from(phi), phid_dot + t * phid_ddot,
                                        phi - phid, g);
    };
    const Vec3 fd_w = (wr(h) - wr(-h)) / (2 * h);
    const Vec3 an = angular_velocity_reference_rate(e0, omega, phid_dot, phid_ddot, phi0 - phid0, g);
    EXPECT_LT((an - fd_w).norm(), 1e-5 * (1.0 + fd_w.norm()));
  }
}

TEST(Control, AttitudeControlYieldsTheErrorDynamics) {
  Gains g;
  const Mat3 I = reference().quad.inertia;
  const EulerAngles phi{0.1, -0.15, 0.4};
  const Vec3 phi_err(0.02, -0.01, 0.03), w_err(0.1, -0.2, 0.05), wdr(0.3, 0.0, -0.1);
  const Vec3 omega(0.2, 0.1, -0.3), tau_hat(0.05, -0.02, 0.01);
  const Vec3 tau = attitude_control(phi_err, w_err, wdr, omega, tau_hat, g, I, phi);
  // I w_dot + w x I w = tau + tau_D with tau_D = tau_hat.
  const Vec3 w_dot = I.inverse() * (tau + tau_hat - omega.cross(I * omega));
  const Vec3 expected =
      wdr - g.Komega * w_err - euler_rate_matrix_inverse(phi) * phi_err;
  EXPECT_LT((w_dot - expected).norm(), 1e-12);
  EXPECT_THROW(attitude_control(phi_err, w_err, wdr, omega, tau_hat, g, I, {0.0, kPi / 2, 0.0}),
               GimbalProximity);
}

TEST(Control, ComputedTorqueLinearizesTheArm) {
  const SystemModel& m = reference();
  Gains g;
  BaseMotion base{rot_z(0.3) * rot_x(0.1), Vec3(0.1, -0.2, 0.3), Vec3(0.1, 0.2, -0.1),
                  Vec3(0.5, 0.0, -0.3)};
  const Vec5 q(0.2, 1.0, 0.1, 0.8, -0.3), qd(0.1, -0.2, 0.3, 0.0, 0.2);
  const Vec5 q_err(0.01, -0.02, 0.0, 0.03, -0.01), qd_err(0.1, 0.0, -0.1, 0.05, 0.0);
  const Vec5 qdd_d(0.5, -0.5, 0.2, 0.0, 0.1);
  const Vec5 tau = computed_torque(m.arm, base, q_err, qd_err, qdd_d, q, qd, g, m.gravity);
  const Vec5 qdd = qdd_d - g.KMv * qd_err - g.KMp * q_err;
  EXPECT_LT((tau - rne(m.arm, base, q, qd, qdd, m.gravity).tau).norm(), 1e-10);
}

TEST(Control, CouplingEstimateAndAblation) {
  const SystemModel& m = reference();
  BaseMotion base{rot_y(0.1), Vec3(0.2, 0, 0), Vec3(0, 0.1, 0), Vec3::Zero()};
  const Vec5 q(0.0, 1.2, 0.0, 0.9, 0.0), qd = Vec5::Constant(0.1), qdd = Vec5::Constant(-0.2);
  const Wrench est = estimate_coupling(m.arm, base, q, qd, qdd, m.gravity);
  const Wrench truth = rne_coupling(m.arm, base, q, qd, qdd, m.gravity);
  EXPECT_EQ(est.force, truth.force);
  EXPECT_EQ(est.torque, truth.torque);
  const Wrench off = estimate_coupling(m.arm, base, q, qd, qdd, m.gravity, true);
  EXPECT_TRUE(off.force.isZero(0.0));
  EXPECT_TRUE(off.torque.isZero(0.0));
}

TEST(Control, AngleErrorWraps) {
  const Vec3 e = angle_error(Vec3(kPi - 0.1, 0.0, -kPi + 0.05), Vec3(-kPi + 0.1, 0.5, kPi - 0.05));
  EXPECT_NEAR(e.x(), -0.2, 1e-12);
  EXPECT_NEAR(e.y(), -0.5, 1e-12);
  EXPECT_NEAR(e.z(), 0.1, 1e-12);
}
