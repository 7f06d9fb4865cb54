#include "aeromanip/trajectory.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace aeromanip {

TrajectoryKind parse_trajectory_kind(const std::string& s) {
  if (s == "fixed") return TrajectoryKind::Fixed;
  if (s == "circle") return TrajectoryKind::Circle;
  if (s == "lemniscate") return TrajectoryKind::Lemniscate;
  if (s == "waypoints") return TrajectoryKind::Waypoints;
  throw ConfigError("unknown trajectory kind '" + s +
                    "' (expected fixed, circle, lemniscate or waypoints)");
}

const char* trajectory_kind_name(TrajectoryKind k) {
  switch (k) {
    case TrajectoryKind::Fixed: return "fixed";
    case TrajectoryKind::Circle: return "circle";
    case TrajectoryKind::Lemniscate: return "lemniscate";
    case TrajectoryKind::Waypoints: return "waypoints";
  }
  return "?";
}

std::vector<Waypoint> load_waypoints(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open waypoint file " + path.string());
  std::string line;
  std::vector<Waypoint> out;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line.find_first_not_of(" \t\r") != std::string::npos && line.rfind("t,x,y,z", 0) == 0) {
        continue;
      }
      throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                        ": expected header t,x,y,z");
    }
    std::stringstream ss(line);
    std::string cell;
    double v[4];
    int n = 0;
    while (std::getline(ss, cell, ',') && n < 4) {
      try {
        std::size_t used = 0;
        v[n] = std::stod(cell, &used);
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": malformed number '" +
                          cell + "'");
      }
      ++n;
    }
    if (n != 4 || std::getline(ss, cell, ',')) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected 4 columns");
    }
    if (!out.empty() && !(v[0] > out.back().t)) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                        ": waypoint times must increase");
    }
    out.push_back({v[0], Vec3(v[1], v[2], v[3])});
  }
  if (out.empty()) throw ConfigError("waypoint file " + path.string() + " has no points");
  return out;
}

EndEffectorGoal trajectory(const TrajectorySpec& spec, double t) {
  EndEffectorGoal g;
  g.alpha = spec.alpha;
  g.beta = spec.beta;
  const double w = spec.omega;
  switch (spec.kind) {
    case TrajectoryKind::Fixed:
      g.p = spec.center;
      break;
    case TrajectoryKind::Circle:
      g.p = spec.center + spec.radius * Vec3(std::cos(w * t), 0.0, std::sin(w * t));
      g.p_dot = spec.radius * w * Vec3(-std::sin(w * t), 0.0, std::cos(w * t));
      break;
    case TrajectoryKind::Lemniscate: {
      const double s = std::sin(w * t);
      const double c = std::cos(w * t);
      g.p = spec.center + Vec3(spec.amp_x * s, 0.0, spec.amp_z * s * c);
      g.p_dot = Vec3(spec.amp_x * w * c, 0.0, spec.amp_z * w * (c * c - s * s));
      break;
    }
    case TrajectoryKind::Waypoints: {
      const auto& wp = spec.waypoints;
      if (wp.empty()) throw ConfigError("waypoint trajectory has no points");
      if (t <= wp.front().t) {
        g.p = spec.center + wp.front().p;
      } else if (t >= wp.back().t) {
        g.p = spec.center + wp.back().p;
      } else {
        std::size_t k = 1;
        while (wp[k].t < t) ++k;
        const double span = wp[k].t - wp[k - 1].t;
        const double u = (t - wp[k - 1].t) / span;
        g.p = spec.center + (1.0 - u) * wp[k - 1].p + u * wp[k].p;
        g.p_dot = (wp[k].p - wp[k - 1].p) / span;
      }
      break;
    }
  }
  if (!spec.feedforward) g.p_dot.setZero();
  return g;
}

}  // namespace aeromanip
