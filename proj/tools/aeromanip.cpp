#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "aeromanip/analysis.hpp"

namespace fs = std::filesystem;
using namespace aeromanip;

namespace {

fs::path default_out_dir() {
  if (const char* env = std::getenv("AEROMANIP_OUT_DIR"); env && *env) return env;
  return "out";
}

void print_metrics(const std::string& name, const Metrics& m) {
  const auto cols = Metrics::columns();
  const auto vals = m.values();
  std::cout << name << '\n';
  for (std::size_t i = 0; i < cols.size(); ++i) {
    std::cout << "  " << cols[i] << " = " << format_number(vals[i]) << '\n';
  }
}

Params parse_params(const std::vector<std::string>& args) {
  Params p;
  for (const auto& a : args) {
    const auto eq = a.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("analysis parameters must look like key=value, got '" + a + "'");
    }
    p[a.substr(0, eq)] = a.substr(eq + 1);
  }
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aerial manipulator simulation and analysis"};
  app.set_version_flag("--version", std::string("aeromanip ") + AEROMANIP_VERSION);
  app.require_subcommand(1);

  fs::path out_dir = default_out_dir();
  bool validate = false;

  auto* sim = app.add_subcommand("simulate", "Run one scenario");
  fs::path sim_cfg;
  std::int64_t seed = -1;
  bool ablate = false;
  bool rne_dump = false;
  sim->add_option("scenario", sim_cfg, "Scenario file")->required()->check(CLI::ExistingFile);
  sim->add_option("--out", out_dir, "Output directory (default $AEROMANIP_OUT_DIR or ./out)");
  sim->add_option("--seed", seed, "Override the scenario seed")->check(CLI::NonNegativeNumber);
  sim->add_flag("--ablate-coupling", ablate, "Disable coupling compensation");
  sim->add_flag("--rne-dump", rne_dump, "Also write per-link RNE forces");
  sim->add_flag("--validate", validate, "Parse the scenario and model only");

  auto* cmp = app.add_subcommand("compare", "Run scenarios and tabulate reductions");
  std::vector<fs::path> cmp_cfgs;
  cmp->add_option("scenarios", cmp_cfgs, "Scenario files (first row is the reference)")
      ->required()
      ->check(CLI::ExistingFile);
  cmp->add_option("--out", out_dir, "Output directory (default $AEROMANIP_OUT_DIR or ./out)");
  cmp->add_flag("--validate", validate, "Parse the scenarios only");

  auto* ana = app.add_subcommand("analyze", "Workspace, amplification or design analysis");
  std::string kind;
  std::vector<std::string> raw_params;
  ana->add_option("kind", kind, "workspace | amplification | design")
      ->required()
      ->check(CLI::IsMember({"workspace", "amplification", "design"}));
  ana->add_option("params", raw_params, "key=value parameters");
  ana->add_option("--out", out_dir, "Output directory (default $AEROMANIP_OUT_DIR or ./out)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      Scenario s = load_scenario(sim_cfg);
      if (seed >= 0) s.seed = static_cast<std::uint64_t>(seed);
      if (ablate) s.ablate_coupling = true;
      if (validate) {
        std::cout << sim_cfg.string() << ": ok\n";
        return 0;
      }
      RunOptions opts;
      opts.out_dir = out_dir;
      opts.rne_dump = rne_dump;
      const RunResult r = run_scenario(s, opts);
      print_metrics(s.name, r.metrics);
      std::cout << "wrote " << r.timeseries_csv.string() << " and " << r.metrics_csv.string()
                << '\n';
    } else if (cmp->parsed()) {
      std::vector<Scenario> scenarios;
      for (const auto& c : cmp_cfgs) scenarios.push_back(load_scenario(c));
      check_comparable(scenarios);
      if (validate) {
        for (const auto& c : cmp_cfgs) std::cout << c.string() << ": ok\n";
        return 0;
      }
      for (const auto& row : compare(scenarios, out_dir)) {
        print_metrics(row.name, row.metrics);
        std::cout << "  ee_pos_reduction_pct = " << format_number(row.ee_pos_reduction) << '\n'
                  << "  base_pos_reduction_pct = " << format_number(row.base_pos_reduction)
                  << '\n';
      }
      std::cout << "wrote " << (out_dir / "comparison.csv").string() << '\n';
    } else if (ana->parsed()) {
      for (const auto& p : analyze(parse_analysis_kind(kind), parse_params(raw_params), out_dir)) {
        std::cout << "wrote " << p.string() << '\n';
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "aeromanip: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
