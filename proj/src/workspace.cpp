#include "aeromanip/workspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace aeromanip {
namespace {

constexpr double kPi = std::numbers::pi;
const double kGoldenAngle = kPi * (3.0 - std::sqrt(5.0));

Vec5 uniform_joints(const ArmModel& arm, std::mt19937_64& rng) {
  Vec5 q;
  for (int i = 0; i < kNumJoints; ++i) {
    std::uniform_real_distribution<double> u(arm.links[i].lower, arm.links[i].upper);
    q[i] = u(rng);
  }
  return q;
}

double gaussian_sum(const PointCloud& points, const Vec3& query, double h) {
  const double inv = 1.0 / (2.0 * h * h);
  double s = 0.0;
  for (const auto& p : points) s += std::exp(-(p - query).squaredNorm() * inv);
  return s;
}

// Unit directions spread over the sphere.
std::vector<Vec3> fibonacci_sphere(int n) {
  std::vector<Vec3> dirs;
  dirs.reserve(n);
  for (int k = 0; k < n; ++k) {
    const double z = 1.0 - 2.0 * (k + 0.5) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = k * kGoldenAngle;
    dirs.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  return dirs;
}

}  // namespace

PointCloud sample_workspace(const ArmModel& arm, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  PointCloud cloud;
  cloud.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    cloud.push_back(forward_kinematics(arm, uniform_joints(arm, rng)).ee_position());
  }
  return cloud;
}

double scott_bandwidth(const PointCloud& points) {
  const double n = static_cast<double>(points.size());
  Vec3 mean = Vec3::Zero();
  for (const auto& p : points) mean += p;
  mean /= n;
  Vec3 var = Vec3::Zero();
  for (const auto& p : points) var += (p - mean).cwiseAbs2();
  var /= (n - 1.0);
  const Vec3 sigma = var.cwiseSqrt();
  const double geo = std::cbrt(sigma.x() * sigma.y() * sigma.z());
  return std::pow(n, -1.0 / 7.0) * geo;
}

double kde_density(const PointCloud& points, const Vec3& query, std::optional<double> bandwidth) {
  if (points.size() < 2) throw Error("kde_density needs at least two points");
  const double h = bandwidth.value_or(scott_bandwidth(points));
  const double norm = 1.0 / (static_cast<double>(points.size()) * std::pow(2.0 * kPi, 1.5) * h * h * h);
  return norm * gaussian_sum(points, query, h);
}

Vec3 kde_mode(const PointCloud& points, std::optional<double> bandwidth) {
  if (points.size() < 2) throw Error("kde_mode needs at least two points");
  const double h = bandwidth.value_or(scott_bandwidth(points));
  const double inv = 1.0 / (2.0 * h * h);

  // Seed candidates from an evenly strided subset of the cloud.
  const std::size_t stride = std::max<std::size_t>(1, points.size() / 1000);
  std::vector<std::pair<double, Vec3>> seeds;
  for (std::size_t i = 0; i < points.size(); i += stride) {
    seeds.emplace_back(gaussian_sum(points, points[i], h), points[i]);
  }
  std::sort(seeds.begin(), seeds.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  seeds.resize(std::min<std::size_t>(seeds.size(), 5));

  Vec3 best = seeds.front().second;
  double best_density = -1.0;
  for (auto [dens, x] : seeds) {
    for (int it = 0; it < 500; ++it) {
      Vec3 num = Vec3::Zero();
      double den = 0.0;
      for (const auto& p : points) {
        const double w = std::exp(-(p - x).squaredNorm() * inv);
        num += w * p;
        den += w;
      }
      const Vec3 next = num / den;
      const double step = (next - x).norm();
      x = next;
      if (step < 1e-9) break;
    }
    const double d = gaussian_sum(points, x, h);
    if (d > best_density) {
      best_density = d;
      best = x;
    }
  }
  return best;
}

SampleStats SampleStats::from(std::vector<double> samples) {
  SampleStats s;
  const double n = static_cast<double>(samples.size());
  s.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : samples) ss += (v - s.mean) * (v - s.mean);
  s.stddev = samples.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  s.samples = std::move(samples);
  return s;
}

ErrorStats error_amplification_mc(const ArmModel& arm, const AmplificationOptions& opts) {
  if (opts.samples < 2) throw Error("error_amplification_mc needs at least two samples");
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> upos(-opts.position_range, opts.position_range);
  std::uniform_real_distribution<double> uatt(-opts.attitude_range, opts.attitude_range);
  std::uniform_real_distribution<double> utilt(-opts.roll_pitch_range, opts.roll_pitch_range);
  std::uniform_real_distribution<double> uyaw(-kPi, kPi);

  std::vector<double> bp, ep, ba, ea;
  for (std::size_t k = 0; k < opts.samples; ++k) {
    const Vec3 e_bp(upos(rng), upos(rng), upos(rng));
    const Vec3 e_ba(uatt(rng), uatt(rng), uatt(rng));
    const Vec3 phi_d(utilt(rng), utilt(rng), uyaw(rng));
    const Vec5 q = uniform_joints(arm, rng);

    const Mat3 R_d = base_rotation(EulerAngles::from(phi_d));
    const Mat3 R = base_rotation(EulerAngles::from(phi_d + e_ba));
    const ChainPose pose = forward_kinematics(arm, q);
    const Vec3 p_EB = pose.ee_position();
    const Mat3 R_EB = pose.ee_rotation();

    const Vec3 induced = (R - R_d) * p_EB;
    const Vec3 e_ep = opts.mode == AmplificationMode::Both ? Vec3(e_bp + induced) : induced;
    const Mat3 E = R_EB.transpose() * R_d.transpose() * R * R_EB;

    bp.push_back(e_bp.norm());
    ep.push_back(e_ep.norm());
    ba.push_back(e_ba.norm());
    ea.push_back(rotation_error_vector(E).norm());
  }
  ErrorStats st;
  st.base_position = SampleStats::from(std::move(bp));
  st.ee_position = SampleStats::from(std::move(ep));
  st.base_attitude = SampleStats::from(std::move(ba));
  st.ee_attitude = SampleStats::from(std::move(ea));
  return st;
}

PointCloud hemisphere_grid(const ArmModel& arm, double radius, int n) {
  PointCloud grid;
  if (radius <= 0.0 || n <= 0) return grid;
  const int surface = n / 2;
  const int volume = n - surface;
  // Hemisphere opens along +z of the mount frame (downward when level).
  auto hemi_dir = [](int k, int count) {
    const double z = (k + 0.5) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = k * kGoldenAngle;
    return Vec3(r * std::cos(phi), r * std::sin(phi), z);
  };
  for (int k = 0; k < surface; ++k) {
    grid.push_back(arm.mount_position + arm.mount_rotation * (radius * hemi_dir(k, surface)));
  }
  constexpr double kPlastic = 0.7548776662466927;  // low-discrepancy radius sequence
  for (int k = 0; k < volume; ++k) {
    const double u = std::fmod((k + 0.5) * kPlastic, 1.0);
    const double r = radius * std::cbrt(u);
    grid.push_back(arm.mount_position + arm.mount_rotation * (r * hemi_dir(k, volume)));
  }
  return grid;
}

bool reachable_any_attitude(const ArmModel& arm, const Vec3& p_EB) {
  static const std::vector<Vec3> directions = [] {
    std::vector<Vec3> d{Vec3::UnitZ()};
    for (const auto& v : fibonacci_sphere(96)) d.push_back(v);
    return d;
  }();
  if ((p_EB - arm.mount_position).norm() > arm.reach()) return false;
  for (const auto& dir : directions) {
    if (!inverse_kinematics_all(arm, p_EB, arm.mount_rotation * dir).empty()) return true;
  }
  return false;
}

double hemisphere_coverage(const ArmModel& arm, double radius, int n) {
  const PointCloud grid = hemisphere_grid(arm, radius, n);
  if (grid.empty()) return 1.0;
  int covered = 0;
  for (const auto& p : grid) covered += reachable_any_attitude(arm, p) ? 1 : 0;
  return static_cast<double>(covered) / static_cast<double>(grid.size());
}

}  // namespace aeromanip
