#include "aeromanip/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace aeromanip {
namespace {

Vec3 vec3(const KeyValueFile& kv, const std::string& key) {
  const auto v = kv.numbers(key, 3);
  return {v[0], v[1], v[2]};
}

Vec3 vec3(const KeyValueFile& kv, const std::string& key, const Vec3& fallback) {
  return kv.has(key) ? vec3(kv, key) : fallback;
}

template <int N>
Eigen::Matrix<double, N, N> diag_gain(const KeyValueFile& kv, const std::string& key,
                                      const Eigen::Matrix<double, N, N>& fallback) {
  if (!kv.has(key)) return fallback;
  const auto v = kv.numbers(key);
  Eigen::Matrix<double, N, N> K = Eigen::Matrix<double, N, N>::Zero();
  if (v.size() == 1) {
    K.diagonal().setConstant(v[0]);
  } else if (v.size() == static_cast<std::size_t>(N)) {
    for (int i = 0; i < N; ++i) K(i, i) = v[i];
  } else {
    throw ConfigError(kv.origin() + ": " + key + " needs 1 or " + std::to_string(N) + " values");
  }
  return K;
}

int parse_axis(const std::string& s, const std::string& origin) {
  if (s == "x") return 0;
  if (s == "y") return 1;
  if (s == "z") return 2;
  throw ConfigError(origin + ": disturbance.axis must be x, y or z");
}

constexpr std::array kKnownKeys = {
    "name", "model", "mode", "duration", "dt", "seed", "settle_time", "log_every", "noise",
    "noise.position_range", "noise.attitude_range", "base.position", "workspace_center",
    "trajectory.kind", "trajectory.center", "trajectory.radius", "trajectory.omega",
    "trajectory.amplitude", "trajectory.attitude", "trajectory.feedforward", "trajectory.file",
    "disturbance.kind", "disturbance.axis", "disturbance.amplitude", "disturbance.frequency",
    "disturbance.onset", "gains.Kp", "gains.Kv", "gains.Kphi", "gains.Komega", "gains.KMp",
    "gains.KMv", "coupling.ablate", "controller.derivative_tau", "estimator.pose_filter_tau",
    "controller.reference_rate", "controller.accel_filter_tau", "controller.qdd_feedforward",
    "controller.yaw", "sensors.position_rate", "sensors.attitude_rate"};

void reject_unknown_keys(const KeyValueFile& kv) {
  for (const auto& [key, value] : kv.entries()) {
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end()) {
      throw ConfigError(kv.origin() + ": unknown key '" + key + "'");
    }
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

Vec3 DisturbanceSpec::force(double t) const {
  Vec3 f = Vec3::Zero();
  switch (kind) {
    case DisturbanceKind::None:
      break;
    case DisturbanceKind::Sinusoid:
      if (t >= onset) f[axis] = amplitude * std::sin(frequency * (t - onset));
      break;
    case DisturbanceKind::Step:
      if (t >= onset) f[axis] = amplitude;
      break;
  }
  return f;
}

NoiseConfig Scenario::noise_config() const {
  NoiseConfig c;
  switch (noise) {
    case NoiseKind::None: c = NoiseConfig::none(); break;
    case NoiseKind::Gaussian: c = NoiseConfig::gaussian(); break;
    case NoiseKind::Uniform: c = NoiseConfig::uniform(); break;
  }
  if (position_noise) c.position_uniform = *position_noise;
  if (attitude_noise_deg) c.attitude_uniform = *attitude_noise_deg * std::numbers::pi / 180.0;
  c.position_rate = position_rate;
  c.attitude_rate = attitude_rate;
  return c;
}

Scenario parse_scenario(const KeyValueFile& kv, const std::filesystem::path& base_dir) {
  reject_unknown_keys(kv);
  Scenario s;
  s.source = kv;
  s.name = kv.str("name", "scenario");
  s.model_path = resolve(base_dir, kv.str("model"));
  s.model = load_model(s.model_path);
  s.mode = parse_mode(kv.str("mode", "hover"));

  s.duration = kv.number("duration");
  s.dt = kv.number("dt", 1e-3);
  if (!(s.duration > 0.0)) throw ConfigError(kv.origin() + ": duration must be positive");
  if (!(s.dt > 0.0)) throw ConfigError(kv.origin() + ": dt must be positive");
  const long long seed = kv.integer("seed", 1);
  if (seed < 0) throw ConfigError(kv.origin() + ": seed must be nonnegative");
  s.seed = static_cast<std::uint64_t>(seed);
  s.settle_time = kv.number("settle_time", 1.0);
  s.log_every = static_cast<int>(kv.integer("log_every", 10));
  if (s.log_every < 1) throw ConfigError(kv.origin() + ": log_every must be at least 1");

  const std::string noise = kv.str("noise", "gaussian");
  if (noise == "none") s.noise = NoiseKind::None;
  else if (noise == "gaussian") s.noise = NoiseKind::Gaussian;
  else if (noise == "uniform") s.noise = NoiseKind::Uniform;
  else throw ConfigError(kv.origin() + ": noise must be none, gaussian or uniform");
  if (kv.has("noise.position_range")) {
    s.position_noise = kv.number("noise.position_range", 0.0);
    if (!(*s.position_noise >= 0.0)) {
      throw ConfigError(kv.origin() + ": noise.position_range must be nonnegative");
    }
  }
  if (kv.has("noise.attitude_range")) {
    s.attitude_noise_deg = kv.number("noise.attitude_range", 0.0);
    if (!(*s.attitude_noise_deg >= 0.0)) {
      throw ConfigError(kv.origin() + ": noise.attitude_range must be nonnegative");
    }
  }

  s.base_position = vec3(kv, "base.position", Vec3::Zero());
  if (kv.has("workspace_center")) s.workspace_center = vec3(kv, "workspace_center");

  TrajectorySpec& tr = s.trajectory;
  tr.kind = parse_trajectory_kind(kv.str("trajectory.kind"));
  tr.center = vec3(kv, "trajectory.center");
  tr.radius = kv.number("trajectory.radius", tr.radius);
  tr.omega = kv.number("trajectory.omega", tr.omega);
  if (kv.has("trajectory.amplitude")) {
    const auto a = kv.numbers("trajectory.amplitude", 2);
    tr.amp_x = a[0];
    tr.amp_z = a[1];
  }
  if (kv.has("trajectory.attitude")) {
    const auto a = kv.numbers("trajectory.attitude", 2);
    tr.alpha = a[0];
    tr.beta = a[1];
  }
  tr.feedforward = kv.flag("trajectory.feedforward", true);
  if (tr.kind == TrajectoryKind::Waypoints) {
    tr.waypoints = load_waypoints(resolve(base_dir, kv.str("trajectory.file")));
  }

  DisturbanceSpec& d = s.disturbance;
  const std::string dk = kv.str("disturbance.kind", "none");
  if (dk == "none") d.kind = DisturbanceKind::None;
  else if (dk == "sinusoid") d.kind = DisturbanceKind::Sinusoid;
  else if (dk == "step") d.kind = DisturbanceKind::Step;
  else throw ConfigError(kv.origin() + ": disturbance.kind must be none, sinusoid or step");
  if (d.kind != DisturbanceKind::None) {
    d.axis = parse_axis(kv.str("disturbance.axis", "x"), kv.origin());
    d.amplitude = kv.number("disturbance.amplitude");
    d.frequency = kv.number("disturbance.frequency", 1.0);
    d.onset = kv.number("disturbance.onset", 0.0);
  }

  Gains& g = s.gains;
  g.Kp = diag_gain<3>(kv, "gains.Kp", g.Kp);
  g.Kv = diag_gain<3>(kv, "gains.Kv", g.Kv);
  g.Kphi = diag_gain<3>(kv, "gains.Kphi", g.Kphi);
  g.Komega = diag_gain<3>(kv, "gains.Komega", g.Komega);
  g.KMp = diag_gain<5>(kv, "gains.KMp", g.KMp);
  g.KMv = diag_gain<5>(kv, "gains.KMv", g.KMv);
  g.validate();

  s.ablate_coupling = kv.flag("coupling.ablate", false);
  s.derivative_tau = kv.number("controller.derivative_tau", s.derivative_tau);
  s.pose_filter_tau = kv.number("estimator.pose_filter_tau", s.pose_filter_tau);
  if (!(s.pose_filter_tau >= 0.0)) {
    throw ConfigError(kv.origin() + ": estimator.pose_filter_tau must be nonnegative");
  }
  const std::string rate = kv.str("controller.reference_rate", "analytic");
  if (rate == "analytic") s.analytic_reference_rate = true;
  else if (rate == "filtered") s.analytic_reference_rate = false;
  else throw ConfigError(kv.origin() + ": controller.reference_rate must be analytic or filtered");
  s.accel_filter_tau = kv.number("controller.accel_filter_tau", s.accel_filter_tau);
  if (!(s.accel_filter_tau >= 0.0)) {
    throw ConfigError(kv.origin() + ": controller.accel_filter_tau must be nonnegative");
  }
  s.qdd_feedforward = kv.flag("controller.qdd_feedforward", false);
  s.yaw = kv.number("controller.yaw", 0.0);
  s.position_rate = kv.number("sensors.position_rate", s.position_rate);
  s.attitude_rate = kv.number("sensors.attitude_rate", s.attitude_rate);
  if (!(s.position_rate > 0.0) || !(s.attitude_rate > 0.0)) {
    throw ConfigError(kv.origin() + ": sensor rates must be positive");
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  return parse_scenario(KeyValueFile::load(path), path.parent_path());
}

}  // namespace aeromanip
