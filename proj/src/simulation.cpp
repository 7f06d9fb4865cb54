#include "aeromanip/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "aeromanip/kinematics.hpp"

namespace aeromanip {
namespace {

std::vector<std::string> make_columns() {
  std::vector<std::string> c{"t"};
  auto add3 = [&c](const std::string& p, const char* a = "x", const char* b = "y",
                   const char* d = "z") {
    c.push_back(p + a);
    c.push_back(p + b);
    c.push_back(p + d);
  };
  auto add5 = [&c](const std::string& p) {
    for (int i = 1; i <= kNumJoints; ++i) c.push_back(p + std::to_string(i));
  };
  add3("p_B_");
  add3("v_B_");
  c.insert(c.end(), {"phi", "theta", "psi"});
  add3("omega_B_");
  add5("q");
  add5("qd");
  add3("p_E_");
  c.insert(c.end(), {"alpha_E", "beta_E", "gamma_E"});
  add3("p_B_d_");
  c.insert(c.end(), {"phi_d", "theta_d", "psi_d"});
  add3("p_E_d_");
  c.insert(c.end(), {"alpha_d", "beta_d"});
  add5("q_d");
  add3("f_D_hat_");
  add3("tau_D_hat_");
  add3("f_D_");
  add3("tau_D_");
  c.insert(c.end(), {"thrust", "e_B_p", "e_B_a", "e_alpha", "e_beta", "e_E_p", "e_E_a", "ik_hold"});
  return c;
}

int column(const std::string& name) {
  const auto& c = timeseries_columns();
  return static_cast<int>(std::find(c.begin(), c.end(), name) - c.begin());
}

void append(std::vector<double>& row, const Vec3& v) { row.insert(row.end(), v.data(), v.data() + 3); }
void append(std::vector<double>& row, const Vec5& v) { row.insert(row.end(), v.data(), v.data() + 5); }

// gamma of R = Rx(alpha) Ry(beta) Rz(gamma).
double tool_roll(const Mat3& R) { return std::atan2(-R(0, 1), R(0, 0)); }

std::string fail_prefix(long k, double t) {
  std::ostringstream os;
  os << "tick " << k << " (t = " << t << " s): ";
  return os.str();
}

}  // namespace

const std::vector<std::string>& timeseries_columns() {
  static const std::vector<std::string> cols = make_columns();
  return cols;
}

std::vector<std::string> Metrics::columns() {
  return {"ee_pos_mean", "ee_pos_max", "ee_att_mean", "ee_att_max", "alpha_err_max",
          "beta_err_max", "base_pos_mean", "base_pos_max", "base_att_mean", "base_att_max",
          "force_err_mean", "torque_err_mean", "base_disp_max_x", "base_disp_max_y",
          "base_disp_max_z", "base_pos_q2_mean", "base_pos_q4_mean", "base_att_q2_mean",
          "base_att_q4_mean", "ik_hold_fraction"};
}

std::vector<double> Metrics::values() const {
  return {ee_pos_mean,      ee_pos_max,       ee_att_mean,      ee_att_max,
          alpha_err_max,    beta_err_max,     base_pos_mean,    base_pos_max,
          base_att_mean,    base_att_max,     force_err_mean,   torque_err_mean,
          base_disp_max.x(), base_disp_max.y(), base_disp_max.z(), base_pos_q2_mean,
          base_pos_q4_mean, base_att_q2_mean, base_att_q4_mean, ik_hold_fraction};
}

Metrics compute_metrics(const std::vector<std::vector<double>>& rows, double settle_time) {
  static const int t = column("t"), pB = column("p_B_x"), fh = column("f_D_hat_x"),
                   th = column("tau_D_hat_x"), fD = column("f_D_x"), tD = column("tau_D_x"),
                   ebp = column("e_B_p"), eba = column("e_B_a"), ea = column("e_alpha"),
                   eb = column("e_beta"), eep = column("e_E_p"), eea = column("e_E_a"),
                   hold = column("ik_hold");
  Metrics m;
  if (rows.empty()) return m;
  const std::vector<double>& first = rows.front();
  std::vector<const std::vector<double>*> window;
  for (const auto& r : rows) {
    if (r[t] >= settle_time) window.push_back(&r);
  }
  if (window.empty()) throw Error("no logged rows after the settle time");

  const double n = static_cast<double>(window.size());
  for (const auto* rp : window) {
    const auto& r = *rp;
    m.ee_pos_mean += r[eep];
    m.ee_pos_max = std::max(m.ee_pos_max, r[eep]);
    m.ee_att_mean += r[eea];
    m.ee_att_max = std::max(m.ee_att_max, r[eea]);
    m.alpha_err_max = std::max(m.alpha_err_max, std::abs(r[ea]));
    m.beta_err_max = std::max(m.beta_err_max, std::abs(r[eb]));
    m.base_pos_mean += r[ebp];
    m.base_pos_max = std::max(m.base_pos_max, r[ebp]);
    m.ik_hold_fraction += r[hold];
    m.base_att_mean += r[eba];
    m.base_att_max = std::max(m.base_att_max, r[eba]);
    m.force_err_mean += std::hypot(r[fh] - r[fD], r[fh + 1] - r[fD + 1], r[fh + 2] - r[fD + 2]);
    m.torque_err_mean += std::hypot(r[th] - r[tD], r[th + 1] - r[tD + 1], r[th + 2] - r[tD + 2]);
    for (int i = 0; i < 3; ++i) {
      m.base_disp_max[i] = std::max(m.base_disp_max[i], std::abs(r[pB + i] - first[pB + i]));
    }
  }
  m.ee_pos_mean /= n;
  m.ee_att_mean /= n;
  m.base_pos_mean /= n;
  m.base_att_mean /= n;
  m.force_err_mean /= n;
  m.torque_err_mean /= n;
  m.ik_hold_fraction /= n;

  auto quarter_mean = [&](int col, std::size_t q) {
    const std::size_t lo = window.size() * q / 4;
    const std::size_t hi = window.size() * (q + 1) / 4;
    if (hi <= lo) return 0.0;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += (*window[i])[col];
    return s / static_cast<double>(hi - lo);
  };
  m.base_pos_q2_mean = quarter_mean(ebp, 1);
  m.base_pos_q4_mean = quarter_mean(ebp, 3);
  m.base_att_q2_mean = quarter_mean(eba, 1);
  m.base_att_q4_mean = quarter_mean(eba, 3);
  return m;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_number(r[i]);
    out << '\n';
  }
  if (!out) throw Error("failed while writing " + path.string());
}

std::vector<std::vector<double>> read_timeseries(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> r;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) r.push_back(std::stod(cell));
    rows.push_back(std::move(r));
  }
  return rows;
}

RunResult run_scenario(const Scenario& s, const RunOptions& opts) {
  const SystemModel& model = s.model;
  const ArmModel& arm = model.arm;
  const double g = model.gravity;
  const double m_S = model.total_mass();
  const Gains& gains = s.gains;

  Vec3 p_C = Vec3::Zero();
  if (s.mode == Mode::Cooperation) p_C = s.workspace_center ? *s.workspace_center : workspace_center(arm);

  // Initial state: base at rest at its start position, arm on the goal.
  FullState x;
  x.p = s.base_position;
  {
    const EndEffectorGoal g0 = trajectory(s.trajectory, 0.0);
    const Vec3 dir = tool_direction(g0.alpha, g0.beta);
    x.q = inverse_kinematics_dir(arm, g0.p - x.p, dir);
  }

  Sensors sensors(s.noise_config(), s.seed);
  FilteredDifferentiator d_vr(s.derivative_tau, s.dt), d_wr(s.derivative_tau, s.dt),
      d_phid(s.derivative_tau, s.dt), d_phidd(s.derivative_tau, s.dt),
      d_pdd(s.derivative_tau, s.dt), d_qdd(s.derivative_tau, s.dt);
  LowPassFilter accel_filter(s.accel_filter_tau, s.dt);
  PoseFilter pose_filter(s.pose_filter_tau, s.dt);

  RunResult result;
  std::vector<std::vector<double>> rne_rows;
  Accelerations last_acc;
  Vec5 q_prev = x.q;
  const long steps = std::lround(s.duration / s.dt);

  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * s.dt;
    x.t = t;
    try {
      sensors.measure(x, last_acc, t);
      const SensorSample& y = sensors.held();
      const EndEffectorGoal goal = trajectory(s.trajectory, t);
      const auto [p_hat, phi_hat] = pose_filter.update(y.p, y.v, y.phi, y.omega);
      const BaseState seen{p_hat, y.v, phi_hat, y.omega};

      // When the measured pose puts the goal outside the arm's reach the
      // joints hold their last feasible setpoint for that tick.
      CoordinationOutput co;
      bool ik_hold = false;
      try {
        co = s.mode == Mode::Hover ? coordinate_hover(goal, seen, arm, s.base_position, q_prev)
                                   : coordinate_cooperation(goal, seen, arm, p_C, q_prev);
      } catch (const Unreachable&) {
        ik_hold = true;
      } catch (const NoFeasibleBranch&) {
        ik_hold = true;
      } catch (const KinematicSingularity&) {
        ik_hold = true;
      }
      if (ik_hold) {
        const Mat3 R_seen = base_rotation(EulerAngles::from(phi_hat));
        co.mode = s.mode;
        co.p_B_d = s.mode == Mode::Hover ? s.base_position : Vec3(goal.p - R_seen * p_C);
        co.p_EB_d = R_seen.transpose() * (goal.p - p_hat);
        co.q_d = q_prev;
        co.qd_d = Vec5::Zero();
      }
      q_prev = co.q_d;

      // Coupling estimate from the held measurements. The acceleration
      // channels are smoothed: compensating with raw one-tick-old
      // accelerations is an algebraic loop whose gain can exceed one.
      Eigen::VectorXd acc_raw(11);
      acc_raw << y.accel.v_dot, y.accel.omega_dot, y.accel.qdd;
      const Eigen::VectorXd acc = accel_filter.update(acc_raw);
      const EulerAngles eul = EulerAngles::from(phi_hat);
      const Mat3 R_meas = base_rotation(eul);
      const BaseMotion seen_motion{R_meas, acc.head<3>(), y.omega, acc.segment<3>(3)};
      const Wrench est = estimate_coupling(arm, seen_motion, y.q, y.qd, acc.tail<5>(), g,
                                           s.ablate_coupling);

      // Position loop.
      const Vec3 p_dot_d = s.mode == Mode::Cooperation ? goal.p_dot : Vec3::Zero();
      const Vec3 p_err = p_hat - co.p_B_d;
      const Vec3 v_r = velocity_reference(p_dot_d, p_err, gains);
      const Vec3 v_err = y.v - v_r;
      const Vec3 v_dot_r =
          s.analytic_reference_rate
              ? velocity_reference_rate(d_pdd.update(p_dot_d), p_dot_d, y.v, gains)
              : Vec3(d_vr.update(v_r));
      const Vec3 f_vec = position_control(p_err, v_err, v_dot_r, est.force, gains, m_S, g);
      const ThrustAttitude ta = thrust_attitude_extract(f_vec, s.yaw, true);

      // Attitude loop.
      const Vec3 phi_d(ta.roll, ta.pitch, s.yaw);
      const Vec3 phi_dot_d = d_phid.update(phi_d);
      const Vec3 phi_err = angle_error(phi_hat, phi_d);
      const Vec3 w_r = angular_velocity_reference(eul, phi_dot_d, phi_err, gains);
      const Vec3 w_err = y.omega - w_r;
      const Vec3 w_dot_r =
          s.analytic_reference_rate
              ? angular_velocity_reference_rate(eul, y.omega, phi_dot_d,
                                                d_phidd.update(phi_dot_d), phi_err, gains)
              : Vec3(d_wr.update(w_r));

      ActuatorCommand cmd;
      cmd.thrust = ta.thrust;
      cmd.torque = attitude_control(phi_err, w_err, w_dot_r, y.omega, est.torque, gains,
                                    model.quad.inertia, eul);

      // Arm loop.
      const Vec5 qdd_d = s.qdd_feedforward ? Vec5(d_qdd.update(co.qd_d)) : Vec5::Zero();
      cmd.joint_torque = computed_torque(arm, seen_motion, y.q - co.q_d, y.qd - co.qd_d, qdd_d,
                                         y.q, y.qd, gains, g);

      Wrench dist;
      dist.force = s.disturbance.force(t);

      StateDerivative d0;
      const FullState next = step(x, cmd, dist, model, s.dt, &d0);

      if (k % s.log_every == 0) {
        const Mat3 R_B = base_rotation(EulerAngles::from(x.phi));
        const ChainPose pose = forward_kinematics(arm, x.q);
        const Pose ee = end_effector_world(x.p, R_B, pose.ee_position(), pose.ee_rotation());
        const Eigen::Vector2d ab = tool_angles(ee.rotation);
        const double e_alpha = wrap_angle(ab[0] - goal.alpha);
        const double e_beta = wrap_angle(ab[1] - goal.beta);

        std::vector<double> row{t};
        row.reserve(timeseries_columns().size());
        append(row, x.p);
        append(row, x.v);
        append(row, x.phi);
        append(row, x.omega);
        append(row, x.q);
        append(row, x.qd);
        append(row, ee.position);
        row.insert(row.end(), {ab[0], ab[1], tool_roll(ee.rotation)});
        append(row, co.p_B_d);
        append(row, phi_d);
        append(row, goal.p);
        row.insert(row.end(), {goal.alpha, goal.beta});
        append(row, co.q_d);
        append(row, est.force);
        append(row, est.torque);
        append(row, d0.coupling.force);
        append(row, d0.coupling.torque);
        row.push_back(cmd.thrust);
        row.push_back((x.p - co.p_B_d).norm());
        row.push_back(angle_error(x.phi, phi_d).norm());
        row.push_back(e_alpha);
        row.push_back(e_beta);
        row.push_back((ee.position - goal.p).norm());
        row.push_back(std::hypot(e_alpha, e_beta));
        row.push_back(ik_hold ? 1.0 : 0.0);
        result.rows.push_back(std::move(row));

        if (opts.rne_dump) {
          const BaseMotion truth{R_B, d0.v_dot, x.omega, d0.omega_dot};
          const RneResult r = rne(arm, truth, x.q, x.qd, d0.qdd, g);
          for (int i = 0; i < kNumJoints; ++i) {
            std::vector<double> dr{t, static_cast<double>(i + 1)};
            append(dr, r.force[i]);
            append(dr, r.moment[i]);
            dr.push_back(r.tau[i]);
            rne_rows.push_back(std::move(dr));
          }
        }
      }

      last_acc = d0.accelerations();
      if (k < steps) x = next;
    } catch (const Error& e) {
      throw Error(fail_prefix(k, t) + e.what());
    }
  }

  result.metrics = compute_metrics(result.rows, s.settle_time);
  if (!opts.out_dir.empty()) {
    result.timeseries_csv = opts.out_dir / (s.name + "_timeseries.csv");
    result.metrics_csv = opts.out_dir / (s.name + "_metrics.csv");
    write_csv(result.timeseries_csv, timeseries_columns(), result.rows);
    write_csv(result.metrics_csv, Metrics::columns(), {result.metrics.values()});
    if (opts.rne_dump) {
      write_csv(opts.out_dir / (s.name + "_rne.csv"),
                {"t", "link", "f_x", "f_y", "f_z", "n_x", "n_y", "n_z", "tau"}, rne_rows);
    }
  }
  return result;
}

}  // namespace aeromanip
