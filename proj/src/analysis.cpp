#include "aeromanip/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "aeromanip/coordination.hpp"

namespace aeromanip {
namespace {

double reduction(double first, double row) {
  if (row == 0.0) return first == 0.0 ? 0.0 : -100.0;
  return 100.0 * (1.0 - first / row);
}

class ParamReader {
 public:
  explicit ParamReader(const Params& p) : p_(p) {}

  double number(const std::string& key, double fallback) {
    used_.push_back(key);
    const auto it = p_.find(key);
    if (it == p_.end()) return fallback;
    try {
      std::size_t n = 0;
      const double v = std::stod(it->second, &n);
      if (n != it->second.size()) throw std::invalid_argument(key);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("parameter " + key + " is not a number: '" + it->second + "'");
    }
  }

  std::string str(const std::string& key, const std::string& fallback) {
    used_.push_back(key);
    const auto it = p_.find(key);
    return it == p_.end() ? fallback : it->second;
  }

  void reject_unknown() const {
    for (const auto& [k, v] : p_) {
      if (std::find(used_.begin(), used_.end(), k) == used_.end()) {
        throw ConfigError("unknown parameter '" + k + "'");
      }
    }
  }

 private:
  const Params& p_;
  std::vector<std::string> used_;
};

std::size_t count(double v, const std::string& key) {
  if (!(v >= 1.0) || v != std::floor(v)) throw ConfigError(key + " must be a positive integer");
  return static_cast<std::size_t>(v);
}

std::uint64_t seed_value(double v) {
  if (!(v >= 0.0) || v != std::floor(v)) throw ConfigError("seed must be a nonnegative integer");
  return static_cast<std::uint64_t>(v);
}

SystemModel model_from(ParamReader& r) {
  const std::string path = r.str("model", "");
  if (!path.empty()) return load_model(path);
  const auto sized = size_arm(0.93, 1.7, 0.5);
  return make_reference_system(sized.lengths);
}

}  // namespace

bool is_run_flag(const std::string& key) {
  return key == "name" || key == "seed" || key == "coupling.ablate";
}

void check_comparable(const std::vector<Scenario>& scenarios) {
  if (scenarios.size() < 2) throw ConfigError("compare needs at least two scenarios");
  auto stripped = [](const Scenario& s) {
    std::map<std::string, std::string> m;
    for (const auto& [k, v] : s.source.entries()) {
      if (!is_run_flag(k)) m[k] = v;
    }
    return m;
  };
  const auto reference = stripped(scenarios.front());
  for (std::size_t i = 1; i < scenarios.size(); ++i) {
    if (stripped(scenarios[i]) != reference || scenarios[i].model != scenarios.front().model) {
      throw ConfigError("scenario '" + scenarios[i].name + "' differs from '" +
                        scenarios.front().name + "' in more than name, seed and coupling.ablate");
    }
  }
}

std::vector<ComparisonRow> compare(const std::vector<Scenario>& scenarios,
                                   const std::filesystem::path& out_dir) {
  check_comparable(scenarios);

  std::vector<ComparisonRow> rows;
  RunOptions opts;
  opts.out_dir = out_dir;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    Scenario s = scenarios[i];
    // Keep per-run outputs apart when names collide.
    if (!out_dir.empty()) s.name = std::to_string(i + 1) + "_" + s.name;
    ComparisonRow row;
    row.name = scenarios[i].name;
    row.metrics = run_scenario(s, opts).metrics;
    rows.push_back(row);
  }
  for (auto& r : rows) {
    r.ee_pos_reduction = reduction(rows.front().metrics.ee_pos_mean, r.metrics.ee_pos_mean);
    r.base_pos_reduction = reduction(rows.front().metrics.base_pos_mean, r.metrics.base_pos_mean);
  }

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream out(out_dir / "comparison.csv");
    out << "scenario";
    for (const auto& c : Metrics::columns()) out << ',' << c;
    out << ",ee_pos_reduction_pct,base_pos_reduction_pct\n";
    for (const auto& r : rows) {
      out << r.name;
      for (double v : r.metrics.values()) out << ',' << format_number(v);
      out << ',' << format_number(r.ee_pos_reduction) << ',' << format_number(r.base_pos_reduction)
          << '\n';
    }
    if (!out) throw Error("failed to write comparison.csv");
  }
  return rows;
}

AnalysisKind parse_analysis_kind(const std::string& s) {
  if (s == "workspace") return AnalysisKind::Workspace;
  if (s == "amplification") return AnalysisKind::Amplification;
  if (s == "design") return AnalysisKind::Design;
  throw ConfigError("unknown analysis '" + s + "' (expected workspace, amplification or design)");
}

std::vector<std::filesystem::path> analyze(AnalysisKind kind, const Params& params,
                                           const std::filesystem::path& out_dir) {
  ParamReader r(params);
  std::vector<std::filesystem::path> written;

  switch (kind) {
    case AnalysisKind::Workspace: {
      const std::size_t n = count(r.number("n", 10000), "n");
      const auto seed = seed_value(r.number("seed", 1));
      const SystemModel model = model_from(r);
      r.reject_unknown();
      const PointCloud cloud = sample_workspace(model.arm, n, seed);
      const double h = scott_bandwidth(cloud);
      std::vector<std::vector<double>> rows;
      rows.reserve(n);
      for (const auto& p : cloud) rows.push_back({p.x(), p.y(), p.z(), kde_density(cloud, p, h)});
      written.push_back(out_dir / "workspace_cloud.csv");
      write_csv(written.back(), {"x", "y", "z", "density"}, rows);
      const Vec3 c = kde_mode(cloud, h);
      written.push_back(out_dir / "workspace_center.csv");
      write_csv(written.back(), {"x", "y", "z", "density", "bandwidth"},
                {{c.x(), c.y(), c.z(), kde_density(cloud, c, h), h}});
      break;
    }
    case AnalysisKind::Amplification: {
      AmplificationOptions o;
      constexpr double deg = std::numbers::pi / 180.0;
      o.samples = count(r.number("n", 1000), "n");
      o.seed = seed_value(r.number("seed", 1));
      o.position_range = r.number("pos_range", o.position_range);
      o.attitude_range = r.number("att_range_deg", o.attitude_range / deg) * deg;
      const SystemModel model = model_from(r);
      r.reject_unknown();

      std::vector<std::vector<double>> summary;
      std::vector<std::vector<double>> samples;
      for (AmplificationMode mode : {AmplificationMode::Both, AmplificationMode::AttitudeOnly}) {
        o.mode = mode;
        const ErrorStats st = error_amplification_mc(model.arm, o);
        const double id = mode == AmplificationMode::Both ? 0.0 : 1.0;
        summary.push_back({id, st.base_position.mean, st.base_position.stddev,
                           st.ee_position.mean, st.ee_position.stddev, st.base_attitude.mean,
                           st.base_attitude.stddev, st.ee_attitude.mean, st.ee_attitude.stddev,
                           st.position_mean_ratio(), st.position_std_ratio()});
        for (std::size_t i = 0; i < o.samples; ++i) {
          samples.push_back({id, st.base_position.samples[i], st.ee_position.samples[i],
                             st.base_attitude.samples[i], st.ee_attitude.samples[i]});
        }
      }
      written.push_back(out_dir / "amplification_summary.csv");
      write_csv(written.back(),
                {"attitude_only", "base_pos_mean", "base_pos_std", "ee_pos_mean", "ee_pos_std",
                 "base_att_mean", "base_att_std", "ee_att_mean", "ee_att_std", "mean_ratio",
                 "std_ratio"},
                summary);
      written.push_back(out_dir / "amplification_samples.csv");
      write_csv(written.back(), {"attitude_only", "base_pos", "ee_pos", "base_att", "ee_att"},
                samples);
      break;
    }
    case AnalysisKind::Design: {
      const double body = r.number("body_length", 0.93);
      const double ratio = r.number("ratio", 1.7);
      const double radius = r.number("radius", 0.5);
      r.reject_unknown();
      const SizingResult res = size_arm(body, ratio, radius);
      const Vec5& l = res.lengths;
      written.push_back(out_dir / "design.csv");
      write_csv(written.back(),
                {"body_length", "ratio", "target_radius", "total_length", "l1", "l2", "l3", "l4",
                 "l5", "iterations", "coverage"},
                {{body, ratio, radius, res.total_length, l[0], l[1], l[2], l[3], l[4],
                  static_cast<double>(res.iterations), res.coverage}});
      break;
    }
  }
  return written;
}

}  // namespace aeromanip
