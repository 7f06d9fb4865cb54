#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "aeromanip/simulation.hpp"
#include "aeromanip/workspace.hpp"

namespace aeromanip {

struct ComparisonRow {
  std::string name;
  Metrics metrics;
  double ee_pos_reduction = 0.0;    ///< percent, 100 (1 - first / this)
  double base_pos_reduction = 0.0;  ///< percent
};

/// Keys that may differ between compared scenarios.
bool is_run_flag(const std::string& key);

/// Throws ConfigError unless there are at least two scenarios and they differ
/// only in run flags.
void check_comparable(const std::vector<Scenario>& scenarios);

/// Runs every scenario and tabulates metrics with reductions relative to the
/// first one. Rejects scenarios that differ in anything but run flags.
/// Writes comparison.csv (and per-run CSVs) when `out_dir` is non-empty.
std::vector<ComparisonRow> compare(const std::vector<Scenario>& scenarios,
                                   const std::filesystem::path& out_dir);

/// `key=value` parameters for analyze.
using Params = std::map<std::string, std::string>;

enum class AnalysisKind { Workspace, Amplification, Design };
AnalysisKind parse_analysis_kind(const std::string& s);

/// Runs one analysis and writes its CSV reports to `out_dir`. Returns the
/// paths written.
std::vector<std::filesystem::path> analyze(AnalysisKind kind, const Params& params,
                                           const std::filesystem::path& out_dir);

}  // namespace aeromanip
