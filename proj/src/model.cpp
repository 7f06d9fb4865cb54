#include "aeromanip/model.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "aeromanip/spatial.hpp"

namespace aeromanip {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLimitTol = 1e-12;

std::vector<double> to_list(const Mat3& m) {
  std::vector<double> v;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) v.push_back(m(r, c));
  return v;
}

std::vector<double> to_list(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

Mat3 mat3_from(const std::vector<double>& v) {
  Mat3 m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = v[3 * r + c];
  return m;
}

Vec3 vec3_from(const std::vector<double>& v) { return {v[0], v[1], v[2]}; }

bool symmetric(const Mat3& m) {
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff());
}

bool positive_definite(const Mat3& m) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(0.5 * (m + m.transpose()));
  return es.eigenvalues().minCoeff() > 0.0;
}

// Distance between two lines given by point/direction.
double line_distance(const Vec3& p1, const Vec3& d1, const Vec3& p2, const Vec3& d2) {
  const Vec3 n = d1.cross(d2);
  if (n.norm() < 1e-12) return (p2 - p1).cross(d1).norm() / d1.norm();
  return std::abs((p2 - p1).dot(n)) / n.norm();
}

// Point on line 1 closest to line 2 (lines assumed non-parallel).
Vec3 closest_point(const Vec3& p1, const Vec3& d1, const Vec3& p2, const Vec3& d2) {
  const double a = d1.dot(d1), b = d1.dot(d2), c = d2.dot(d2);
  const Vec3 w = p1 - p2;
  const double den = a * c - b * b;
  if (std::abs(den) < 1e-15) return p1;
  const double s = (b * d2.dot(w) - c * d1.dot(w)) / den;
  return p1 + s * d1;
}

}  // namespace

double ArmModel::total_mass() const {
  double m = 0.0;
  for (const auto& l : links) m += l.mass;
  return m;
}

double ArmModel::reach() const {
  double r = tool_position.norm();
  for (const auto& l : links) r += std::abs(l.mdh.a) + std::abs(l.mdh.d);
  return r;
}

Vec5 ArmModel::lower_limits() const {
  Vec5 v;
  for (int i = 0; i < kNumJoints; ++i) v[i] = links[i].lower;
  return v;
}

Vec5 ArmModel::upper_limits() const {
  Vec5 v;
  for (int i = 0; i < kNumJoints; ++i) v[i] = links[i].upper;
  return v;
}

Eigen::Matrix4d mdh_transform(const MdhParams& p, double q) {
  const double th = p.theta_offset + q;
  const double ct = std::cos(th), st = std::sin(th);
  const double ca = std::cos(p.alpha), sa = std::sin(p.alpha);
  Eigen::Matrix4d T;
  T << ct, -st, 0, p.a,
       st * ca, ct * ca, -sa, -sa * p.d,
       st * sa, ct * sa, ca, ca * p.d,
       0, 0, 0, 1;
  return T;
}

std::vector<std::string> check_invariants(const SystemModel& m) {
  std::vector<std::string> errs;
  if (!(m.quad.mass > 0.0)) errs.push_back("quad.mass must be > 0");
  if (!symmetric(m.quad.inertia)) errs.push_back("quad.inertia is not symmetric");
  else if (!positive_definite(m.quad.inertia)) errs.push_back("quad.inertia is not positive definite");
  if (!(m.gravity >= 0.0)) errs.push_back("gravity must be >= 0");

  const ArmModel& arm = m.arm;
  for (int i = 0; i < kNumJoints; ++i) {
    const Link& l = arm.links[i];
    const std::string name = "link" + std::to_string(i + 1);
    const std::string q = "q" + std::to_string(i + 1);
    if (!(l.lower < l.upper)) errs.push_back(name + ".limits: lower must be < upper (" + q + ")");
    const double lo = (i == 1) ? 0.0 : -0.75 * kPi;
    const double hi = 0.75 * kPi;
    if (l.lower < lo - kLimitTol || l.upper > hi + kLimitTol) {
      errs.push_back(name + ".limits: " + q + " range must lie within [" + format_number(lo) +
                     ", " + format_number(hi) + "]");
    }
    if (!(l.mass >= 0.0)) errs.push_back(name + ".mass must be >= 0");
    if (!symmetric(l.inertia)) errs.push_back(name + ".inertia (link " + std::to_string(i + 1) + " inertia) is not symmetric");
    else if (!positive_definite(l.inertia)) errs.push_back(name + ".inertia (link " + std::to_string(i + 1) + " inertia) is not positive definite");
  }
  if (!is_rotation(arm.mount_rotation, 1e-9)) errs.push_back("mount.rotation is not a rotation matrix");
  if (!is_rotation(arm.tool_rotation, 1e-9)) errs.push_back("tool.rotation is not a rotation matrix");

  // Structure required by the closed-form inverse kinematics.
  const auto& L = arm.links;
  auto near = [](double a, double b) { return std::abs(a - b) < 1e-9; };
  auto quarter = [&](double a) { return near(std::abs(a), kPi / 2); };
  if (!near(L[1].mdh.a, 0) || !near(L[2].mdh.a, 0) || !near(L[3].mdh.a, 0) || !near(L[1].mdh.d, 0))
    errs.push_back("link2..link4.mdh: shoulder offsets a1, a2, a3, d2 must be zero");
  if (!quarter(L[1].mdh.alpha) || !quarter(L[2].mdh.alpha) || !quarter(L[3].mdh.alpha))
    errs.push_back("link2..link4.mdh: twists alpha1..alpha3 must be +-pi/2");
  if (!near(L[4].mdh.alpha, 0) || !near(L[3].mdh.d, 0) || !near(L[4].mdh.d, 0))
    errs.push_back("link4..link5.mdh: elbow and wrist axes must be parallel and coplanar (alpha4 = d4 = d5 = 0)");
  if (!(L[2].mdh.d > 0)) errs.push_back("link3.mdh: upper-arm length d3 must be > 0");
  if (!(L[4].mdh.a > 0)) errs.push_back("link5.mdh: forearm length a4 must be > 0");
  if (!near(arm.tool_position.z(), 0) || !near(arm.tool_rotation(2, 2), 0))
    errs.push_back("tool: end-effector point and axis must lie in the wrist plane");

  // Geometric checks at the zero configuration.
  Eigen::Matrix4d T = Eigen::Matrix4d::Identity();
  std::array<Vec3, kNumJoints> origin, axis;
  for (int i = 0; i < kNumJoints; ++i) {
    T = T * mdh_transform(L[i].mdh, 0.0);
    origin[i] = T.block<3, 1>(0, 3);
    axis[i] = T.block<3, 1>(0, 2);
  }
  const double tol = 1e-9;
  bool intersect = line_distance(origin[0], axis[0], origin[1], axis[1]) <= tol;
  if (intersect) {
    const Vec3 c = closest_point(origin[0], axis[0], origin[1], axis[1]);
    intersect = (c - origin[2]).cross(axis[2]).norm() <= tol;
  }
  if (!intersect) errs.push_back("axes of joints 1-3 do not intersect at one point");
  if (axis[3].cross(axis[4]).norm() > tol) errs.push_back("axes of joints 4 and 5 are not parallel");
  return errs;
}

SystemModel parse_model(const KeyValueFile& kv) {
  SystemModel m;
  m.gravity = kv.number("gravity");
  m.quad.mass = kv.number("quad.mass");
  m.quad.inertia = mat3_from(kv.numbers("quad.inertia", 9));
  m.quad.wheelbase = kv.number("quad.wheelbase");
  m.arm.mount_position = vec3_from(kv.numbers("mount.position", 3));
  m.arm.mount_rotation = mat3_from(kv.numbers("mount.rotation", 9));
  m.arm.tool_position = vec3_from(kv.numbers("tool.position", 3));
  m.arm.tool_rotation = mat3_from(kv.numbers("tool.rotation", 9));
  for (int i = 0; i < kNumJoints; ++i) {
    const std::string p = "link" + std::to_string(i + 1) + ".";
    Link& l = m.arm.links[i];
    const auto mdh = kv.numbers(p + "mdh", 4);
    l.mdh = {mdh[0], mdh[1], mdh[2], mdh[3]};
    const auto lim = kv.numbers(p + "limits", 2);
    l.lower = lim[0];
    l.upper = lim[1];
    l.mass = kv.number(p + "mass");
    l.com = vec3_from(kv.numbers(p + "com", 3));
    l.inertia = mat3_from(kv.numbers(p + "inertia", 9));
  }
  const auto errs = check_invariants(m);
  if (!errs.empty()) {
    std::string msg = kv.origin() + ": invalid model:";
    for (const auto& e : errs) msg += "\n  - " + e;
    throw InvariantViolation(msg);
  }
  return m;
}

SystemModel load_model(const std::filesystem::path& path) {
  return parse_model(KeyValueFile::load(path));
}

std::string model_to_string(const SystemModel& m) {
  std::ostringstream out;
  out << "# aerial manipulator model (SI units, angles in rad)\n";
  out << "# linkN.mdh = a alpha d theta_offset ; matrices are row-major\n";
  out << "gravity = " << format_number(m.gravity) << "\n";
  out << "quad.mass = " << format_number(m.quad.mass) << "\n";
  out << "quad.inertia = " << format_numbers(to_list(m.quad.inertia)) << "\n";
  out << "quad.wheelbase = " << format_number(m.quad.wheelbase) << "\n";
  out << "mount.position = " << format_numbers(to_list(m.arm.mount_position)) << "\n";
  out << "mount.rotation = " << format_numbers(to_list(m.arm.mount_rotation)) << "\n";
  out << "tool.position = " << format_numbers(to_list(m.arm.tool_position)) << "\n";
  out << "tool.rotation = " << format_numbers(to_list(m.arm.tool_rotation)) << "\n";
  for (int i = 0; i < kNumJoints; ++i) {
    const Link& l = m.arm.links[i];
    const std::string p = "link" + std::to_string(i + 1) + ".";
    out << p << "mdh = "
        << format_numbers({l.mdh.a, l.mdh.alpha, l.mdh.d, l.mdh.theta_offset}) << "\n";
    out << p << "limits = " << format_numbers({l.lower, l.upper}) << "\n";
    out << p << "mass = " << format_number(l.mass) << "\n";
    out << p << "com = " << format_numbers(to_list(l.com)) << "\n";
    out << p << "inertia = " << format_numbers(to_list(l.inertia)) << "\n";
  }
  return out.str();
}

void save_model(const SystemModel& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << model_to_string(m);
}

ArmModel make_arm(const Vec5& lengths, double total_mass, double min_link_mass,
                  double rod_radius) {
  ArmModel arm;
  const double l1 = lengths[0], l2 = lengths[1], l3 = lengths[2], l4 = lengths[3], l5 = lengths[4];
  const double lim = 0.75 * kPi;

  arm.links[0].mdh = {0.0, 0.0, l1, 0.0};
  arm.links[1].mdh = {0.0, -kPi / 2, 0.0, 0.0};
  arm.links[2].mdh = {0.0, kPi / 2, l2 + l3, 0.0};
  arm.links[3].mdh = {0.0, -kPi / 2, 0.0, -kPi / 2};
  arm.links[4].mdh = {l4, 0.0, 0.0, 0.0};
  for (int i = 0; i < kNumJoints; ++i) {
    arm.links[i].lower = (i == 1) ? 0.0 : -lim;
    arm.links[i].upper = lim;
  }

  // Mass split: floor first, remainder proportional to length.
  Vec5 mass = Vec5::Zero();
  std::array<bool, kNumJoints> floored{};
  for (int pass = 0; pass < kNumJoints; ++pass) {
    double free_len = 0.0, free_mass = total_mass;
    for (int i = 0; i < kNumJoints; ++i) {
      if (floored[i]) free_mass -= min_link_mass;
      else free_len += lengths[i];
    }
    bool changed = false;
    for (int i = 0; i < kNumJoints; ++i) {
      if (floored[i]) { mass[i] = min_link_mass; continue; }
      mass[i] = free_len > 0 ? free_mass * lengths[i] / free_len : free_mass / kNumJoints;
      if (mass[i] < min_link_mass) { floored[i] = true; changed = true; }
    }
    if (!changed) break;
  }

  // Rod axis and CoM of each link in its own frame.
  const std::array<Vec3, kNumJoints> com = {Vec3(0, 0, -l1 / 2), Vec3(0, -l2 / 2, 0),
                                            Vec3(0, 0, -l3 / 2), Vec3(l4 / 2, 0, 0),
                                            Vec3(l5 / 2, 0, 0)};
  const std::array<int, kNumJoints> rod_axis = {2, 1, 2, 0, 0};
  for (int i = 0; i < kNumJoints; ++i) {
    const double m = mass[i];
    const double r2 = rod_radius * rod_radius;
    const double transverse = m * (3.0 * r2 + lengths[i] * lengths[i]) / 12.0;
    Mat3 I = Mat3::Identity() * transverse;
    I(rod_axis[i], rod_axis[i]) = 0.5 * m * r2;
    arm.links[i].mass = m;
    arm.links[i].com = com[i];
    arm.links[i].inertia = I;
  }
  arm.tool_position = Vec3(l5, 0, 0);
  arm.tool_rotation = rot_y(kPi / 2);
  arm.tool_rotation(2, 2) = 0.0;  // exact zero instead of cos(pi/2)
  arm.tool_rotation(0, 0) = 0.0;
  return arm;
}

SystemModel make_reference_system(const Vec5& lengths) {
  SystemModel m;
  m.gravity = 9.81;
  m.quad.mass = 4.39;
  m.quad.wheelbase = 0.93;
  m.quad.inertia = Eigen::Vector3d(0.12, 0.12, 0.22).asDiagonal();
  m.arm = make_arm(lengths, 1.03);
  return m;
}

}  // namespace aeromanip
