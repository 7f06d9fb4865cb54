#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "aeromanip/scenario.hpp"

namespace aeromanip {

/// Summary of one run, computed over logged rows with t >= settle time.
struct Metrics {
  double ee_pos_mean = 0.0;      ///< |e_E,p| (m)
  double ee_pos_max = 0.0;
  double ee_att_mean = 0.0;      ///< |e_E,a| (rad)
  double ee_att_max = 0.0;
  double alpha_err_max = 0.0;    ///< |alpha - alpha_d| (rad)
  double beta_err_max = 0.0;
  double base_pos_mean = 0.0;    ///< |p~_B| (m)
  double base_pos_max = 0.0;
  double base_att_mean = 0.0;    ///< |Phi~_B| (rad)
  double base_att_max = 0.0;
  double force_err_mean = 0.0;   ///< |f_D_hat - f_D| (N)
  double torque_err_mean = 0.0;  ///< |tau_D_hat - tau_D| (N m)
  Vec3 base_disp_max = Vec3::Zero();  ///< max |p_B - p_B(0)| per axis (m)
  double base_pos_q2_mean = 0.0;  ///< |p~_B| mean over the second quarter of the window
  double base_pos_q4_mean = 0.0;  ///< same, last quarter
  double base_att_q2_mean = 0.0;
  double base_att_q4_mean = 0.0;
  double ik_hold_fraction = 0.0;  ///< share of logged ticks whose joint setpoint was held

  static std::vector<std::string> columns();
  std::vector<double> values() const;
};

/// Column names of the time-series CSV.
const std::vector<std::string>& timeseries_columns();

/// Metrics from time-series rows (one vector per CSV row, in column order).
Metrics compute_metrics(const std::vector<std::vector<double>>& rows, double settle_time);

/// Reads a time-series CSV written by run_scenario.
std::vector<std::vector<double>> read_timeseries(const std::filesystem::path& path);

struct RunOptions {
  std::filesystem::path out_dir;  ///< empty: keep rows in memory only
  bool rne_dump = false;          ///< also write per-link RNE forces
};

struct RunResult {
  Metrics metrics;
  std::vector<std::vector<double>> rows;
  std::filesystem::path timeseries_csv;
  std::filesystem::path metrics_csv;
};

/// Closed-loop simulation of a scenario. Throws Error naming the failing tick.
RunResult run_scenario(const Scenario& s, const RunOptions& opts = {});

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace aeromanip
