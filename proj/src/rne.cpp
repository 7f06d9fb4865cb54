#include "aeromanip/rne.hpp"

namespace aeromanip {
namespace {

// Transform of frame i+1 relative to frame i. Frame 0 is the body frame; the
// mount transform is folded into the first joint.
struct Step {
  Mat3 R;
  Vec3 P;
};

std::array<Step, kNumJoints> chain_steps(const ArmModel& arm, const Vec5& q) {
  std::array<Step, kNumJoints> steps;
  for (int i = 0; i < kNumJoints; ++i) {
    const Eigen::Matrix4d T = mdh_transform(arm.links[i].mdh, q[i]);
    steps[i].R = T.topLeftCorner<3, 3>();
    steps[i].P = T.topRightCorner<3, 1>();
  }
  steps[0].P = arm.mount_position + arm.mount_rotation * steps[0].P;
  steps[0].R = arm.mount_rotation * steps[0].R;
  return steps;
}

}  // namespace

RneResult rne(const ArmModel& arm, const BaseMotion& base, const Vec5& q, const Vec5& qd,
              const Vec5& qdd, double gravity) {
  const auto steps = chain_steps(arm, q);
  const Vec3 z = Vec3::UnitZ();

  Vec3 w = base.omega;
  Vec3 wd = base.omega_dot;
  Vec3 vd = base.R_B.transpose() * (base.v_dot - gravity * z);

  std::array<Vec3, kNumJoints> F, N;
  for (int i = 0; i < kNumJoints; ++i) {
    const Mat3 Rt = steps[i].R.transpose();
    const Vec3& P = steps[i].P;
    const Vec3 vd_next = Rt * (wd.cross(P) + w.cross(w.cross(P)) + vd);
    const Vec3 w_par = Rt * w;
    w = w_par + qd[i] * z;
    wd = Rt * wd + w_par.cross(qd[i] * z) + qdd[i] * z;
    vd = vd_next;

    const Link& L = arm.links[i];
    const Vec3 vc = wd.cross(L.com) + w.cross(w.cross(L.com)) + vd;
    F[i] = L.mass * vc;
    N[i] = L.inertia * wd + w.cross(L.inertia * w);
  }

  RneResult out;
  Vec3 f = Vec3::Zero();
  Vec3 n = Vec3::Zero();
  for (int i = kNumJoints - 1; i >= 0; --i) {
    Vec3 f_child = Vec3::Zero();
    Vec3 n_child = Vec3::Zero();
    Vec3 P_child = Vec3::Zero();
    if (i + 1 < kNumJoints) {
      f_child = steps[i + 1].R * f;
      n_child = steps[i + 1].R * n;
      P_child = steps[i + 1].P;
    }
    const Vec3& c = arm.links[i].com;
    n = N[i] + n_child + c.cross(F[i]) + P_child.cross(f_child);
    f = F[i] + f_child;
    out.force[i] = f;
    out.moment[i] = n;
    out.tau[i] = n.dot(z);
  }

  const Vec3 f1 = steps[0].R * out.force[0];
  const Vec3 n1 = steps[0].R * out.moment[0];
  out.coupling.force = -base.R_B * f1 - arm.total_mass() * gravity * z;
  out.coupling.torque = -steps[0].P.cross(f1) - n1;
  return out;
}

Wrench rne_coupling(const ArmModel& arm, const BaseMotion& base, const Vec5& q, const Vec5& qd,
                    const Vec5& qdd, double gravity) {
  return rne(arm, base, q, qd, qdd, gravity).coupling;
}

Mat5 arm_inertia_matrix(const ArmModel& arm, const Vec5& q) {
  Mat5 M;
  const BaseMotion rest;
  for (int j = 0; j < kNumJoints; ++j) {
    M.col(j) = rne(arm, rest, q, Vec5::Zero(), Vec5::Unit(j), 0.0).tau;
  }
  return 0.5 * (M + M.transpose());
}

Vec5 arm_bias(const ArmModel& arm, const BaseMotion& base, const Vec5& q, const Vec5& qd,
              double gravity) {
  return rne(arm, base, q, qd, Vec5::Zero(), gravity).tau;
}

LinkMotion link_motion(const ArmModel& arm, const BaseVelocity& base, const Vec5& q,
                       const Vec5& qd) {
  const auto steps = chain_steps(arm, q);
  const Vec3 z = Vec3::UnitZ();
  LinkMotion out;

  // Orientation/position of the current frame in the inertial frame, plus
  // its origin velocity (inertial) and angular velocity (current frame).
  Mat3 R = base.R_B;
  Vec3 p = base.p;
  Vec3 v = base.v;
  Vec3 w = base.omega;
  for (int i = 0; i < kNumJoints; ++i) {
    const Vec3 wI = R * w;
    const Vec3 dP = R * steps[i].P;
    v += wI.cross(dP);
    p += dP;
    R = R * steps[i].R;
    w = steps[i].R.transpose() * w + qd[i] * z;

    const Vec3 c = R * arm.links[i].com;
    out.com_position[i] = p + c;
    out.com_velocity[i] = v + (R * w).cross(c);
    out.omega[i] = w;
  }
  return out;
}

Vec3 arm_linear_momentum(const ArmModel& arm, const BaseVelocity& base, const Vec5& q,
                         const Vec5& qd) {
  const LinkMotion m = link_motion(arm, base, q, qd);
  Vec3 P = Vec3::Zero();
  for (int i = 0; i < kNumJoints; ++i) P += arm.links[i].mass * m.com_velocity[i];
  return P;
}

double arm_kinetic_energy(const ArmModel& arm, const BaseVelocity& base, const Vec5& q,
                          const Vec5& qd) {
  const LinkMotion m = link_motion(arm, base, q, qd);
  double T = 0.0;
  for (int i = 0; i < kNumJoints; ++i) {
    const Link& L = arm.links[i];
    T += 0.5 * L.mass * m.com_velocity[i].squaredNorm();
    T += 0.5 * m.omega[i].dot(L.inertia * m.omega[i]);
  }
  return T;
}

double arm_potential_energy(const ArmModel& arm, const BaseVelocity& base, const Vec5& q,
                            double gravity) {
  const LinkMotion m = link_motion(arm, base, q, Vec5::Zero());
  double U = 0.0;
  for (int i = 0; i < kNumJoints; ++i) U -= arm.links[i].mass * gravity * m.com_position[i].z();
  return U;
}

}  // namespace aeromanip
