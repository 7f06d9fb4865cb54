#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "aeromanip/analysis.hpp"
#include "aeromanip/simulation.hpp"

using namespace aeromanip;
namespace fs = std::filesystem;

namespace {

fs::path data_dir() {
  const char* env = std::getenv("AEROMANIP_TEST_DATA");
  return env ? fs::path(env) : fs::path(AEROMANIP_SOURCE_DIR);
}

fs::path configs() { return data_dir() / "configs"; }

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("aeromanip_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Scenario scenario_from(const std::string& text) {
  return parse_scenario(KeyValueFile::parse(text, "test.cfg"), configs());
}

Scenario short_run(const std::string& file, double duration) {
  Scenario s = load_scenario(configs() / file);
  s.duration = duration;
  return s;
}

const std::string kMinimal =
    "model = reference_model.cfg\n"
    "duration = 1\n"
    "trajectory.kind = fixed\n"
    "trajectory.center = 0 0.25 0.3\n";

}  // namespace

TEST(Trajectory, CircleAndVelocity) {
  TrajectorySpec spec;
  spec.kind = TrajectoryKind::Circle;
  spec.center = Vec3(0, 0.35, 0.175);
  const EndEffectorGoal g0 = trajectory(spec, 0.0);
  EXPECT_TRUE(g0.p.isApprox(Vec3(0.12, 0.35, 0.175), 1e-14));
  const double h = 1e-6, t = 0.7;
  const Vec3 fd = (trajectory(spec, t + h).p - trajectory(spec, t - h).p) / (2 * h);
  EXPECT_LT((trajectory(spec, t).p_dot - fd).norm(), 1e-8);
  for (double s = 0; s < 7; s += 0.1) {
    EXPECT_NEAR((trajectory(spec, s).p - spec.center).norm(), 0.12, 1e-12);
  }
}

TEST(Trajectory, LemniscateVelocityAndFeedforwardSwitch) {
  TrajectorySpec spec;
  spec.kind = TrajectoryKind::Lemniscate;
  spec.omega = 0.3;
  const double h = 1e-6, t = 2.1;
  const Vec3 fd = (trajectory(spec, t + h).p - trajectory(spec, t - h).p) / (2 * h);
  EXPECT_LT((trajectory(spec, t).p_dot - fd).norm(), 1e-8);
  spec.feedforward = false;
  EXPECT_TRUE(trajectory(spec, t).p_dot.isZero(0.0));
}

TEST(Trajectory, WaypointsInterpolateAndHold) {
  TrajectorySpec spec;
  spec.kind = TrajectoryKind::Waypoints;
  spec.center = Vec3(1, 0, 0);
  spec.waypoints = load_waypoints(configs() / "sample_path.csv");
  ASSERT_GE(spec.waypoints.size(), 3u);
  EXPECT_TRUE(trajectory(spec, -1.0).p.isApprox(spec.center + spec.waypoints.front().p));
  const EndEffectorGoal mid = trajectory(spec, 5.0);
  EXPECT_TRUE(mid.p.isApprox(Vec3(1.15, 0, 0), 1e-12));
  EXPECT_TRUE(mid.p_dot.isApprox(Vec3(0.03, 0, 0), 1e-12));
  const EndEffectorGoal end = trajectory(spec, 1e6);
  EXPECT_TRUE(end.p.isApprox(spec.center + spec.waypoints.back().p));
  EXPECT_TRUE(end.p_dot.isZero(0.0));
}

TEST(Trajectory, WaypointFileErrors) {
  const fs::path dir = scratch("waypoints");
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return dir / name;
  };
  EXPECT_THROW(load_waypoints(dir / "missing.csv"), ConfigError);
  EXPECT_THROW(load_waypoints(write("noheader.csv", "0,0,0,0\n")), ConfigError);
  EXPECT_THROW(load_waypoints(write("order.csv", "t,x,y,z\n1,0,0,0\n1,0,0,0\n")), ConfigError);
  EXPECT_THROW(load_waypoints(write("cols.csv", "t,x,y,z\n0,0,0\n")), ConfigError);
  EXPECT_THROW(load_waypoints(write("num.csv", "t,x,y,z\n0,a,0,0\n")), ConfigError);
  EXPECT_THROW(load_waypoints(write("empty.csv", "t,x,y,z\n")), ConfigError);
  EXPECT_THROW(parse_trajectory_kind("spiral"), ConfigError);
}

TEST(Scenario, DefaultsAndOverrides) {
  const Scenario s = scenario_from(kMinimal);
  EXPECT_EQ(s.mode, Mode::Hover);
  EXPECT_EQ(s.noise, NoiseKind::Gaussian);
  EXPECT_DOUBLE_EQ(s.dt, 1e-3);
  EXPECT_TRUE(s.gains.Kp.isApprox(2.2 * Mat3::Identity()));
  EXPECT_TRUE(s.gains.KMp.isApprox(100.0 * Mat5::Identity()));

  const Scenario o = scenario_from(kMinimal +
                                   "gains.Kp = 1 2 3\n"
                                   "noise = uniform\n"
                                   "noise.attitude_range = 2\n"
                                   "disturbance.kind = sinusoid\n"
                                   "disturbance.axis = y\n"
                                   "disturbance.amplitude = 4\n");
  EXPECT_EQ(o.gains.Kp.diagonal(), Vec3(1, 2, 3));
  const NoiseConfig nc = o.noise_config();
  EXPECT_DOUBLE_EQ(nc.position_uniform, 0.02);
  EXPECT_NEAR(nc.attitude_uniform, 2.0 * std::numbers::pi / 180.0, 1e-15);
  EXPECT_EQ(o.disturbance.axis, 1);
  EXPECT_NEAR(o.disturbance.force(std::numbers::pi / 2).y(), 4.0, 1e-12);
}

TEST(Scenario, InvalidInputsAreRejected) {
  EXPECT_THROW(scenario_from(kMinimal + "gains.Kp = 1 2\n"), ConfigError);
  EXPECT_THROW(scenario_from(kMinimal + "gains.KMv = -1\n"), ConfigError);
  EXPECT_THROW(scenario_from(kMinimal + "mode = orbit\n"), ConfigError);
  EXPECT_THROW(scenario_from(kMinimal + "noise = pink\n"), ConfigError);
  EXPECT_THROW(scenario_from(kMinimal + "trajectory.radus = 0.1\n"), ConfigError);
  EXPECT_THROW(scenario_from(kMinimal + "disturbance.kind = step\ndisturbance.axis = w\n"
                                        "disturbance.amplitude = 1\n"),
               ConfigError);
  EXPECT_THROW(scenario_from("model = reference_model.cfg\ntrajectory.kind = fixed\n"
                             "trajectory.center = 0 0 0\n"),
               ConfigError);  // no duration
  EXPECT_THROW(scenario_from("model = nothere.cfg\nduration = 1\n"), ConfigError);
}

TEST(Scenario, DisturbanceShapes) {
  DisturbanceSpec step{DisturbanceKind::Step, 0, 4.0, 1.0, 3.0};
  EXPECT_EQ(step.force(2.999), Vec3::Zero());
  EXPECT_EQ(step.force(3.0), Vec3(4, 0, 0));
  DisturbanceSpec sine{DisturbanceKind::Sinusoid, 2, 4.0, 1.0, 0.0};
  EXPECT_NEAR(sine.force(0.5).z(), 4.0 * std::sin(0.5), 1e-15);
}

TEST(Metrics, ComputedFromRows) {
  const auto& cols = timeseries_columns();
  auto col = [&](const std::string& n) {
    return static_cast<std::size_t>(std::find(cols.begin(), cols.end(), n) - cols.begin());
  };
  std::vector<std::vector<double>> rows;
  for (int k = 0; k < 8; ++k) {
    std::vector<double> r(cols.size(), 0.0);
    r[col("t")] = 0.5 * k;
    r[col("e_E_p")] = k;  // rows with t < 1 are dropped
    r[col("e_B_p")] = k;
    r[col("p_B_x")] = -0.1 * k;
    r[col("f_D_hat_x")] = 3.0;
    r[col("f_D_x")] = 0.0;
    r[col("f_D_hat_y")] = 4.0;
    r[col("ik_hold")] = k % 2;
    rows.push_back(r);
  }
  const Metrics m = compute_metrics(rows, 1.0);
  EXPECT_DOUBLE_EQ(m.ee_pos_mean, 4.5);  // mean of 2..7
  EXPECT_DOUBLE_EQ(m.ee_pos_max, 7.0);
  EXPECT_DOUBLE_EQ(m.force_err_mean, 5.0);
  EXPECT_NEAR(m.base_disp_max.x(), 0.7, 1e-15);
  EXPECT_DOUBLE_EQ(m.ik_hold_fraction, 0.5);
  EXPECT_DOUBLE_EQ(m.base_pos_q2_mean, 3.5);  // window rows 1..2 of 6 -> values 3, 4
  EXPECT_DOUBLE_EQ(m.base_pos_q4_mean, 6.5);
  EXPECT_EQ(Metrics::columns().size(), m.values().size());
  EXPECT_THROW(compute_metrics(rows, 100.0), Error);
}

TEST(Simulation, ShortHoverRunWritesCsvsThatRoundTrip) {
  const fs::path out = scratch("sim");
  Scenario s = short_run("ex3_step.cfg", 4.0);
  const RunResult r = run_scenario(s, {out, false});
  ASSERT_TRUE(fs::exists(r.timeseries_csv));
  ASSERT_TRUE(fs::exists(r.metrics_csv));
  const auto rows = read_timeseries(r.timeseries_csv);
  ASSERT_EQ(rows.size(), r.rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ASSERT_EQ(rows[i].size(), timeseries_columns().size());
    for (std::size_t j = 0; j < rows[i].size(); ++j) EXPECT_EQ(rows[i][j], r.rows[i][j]);
  }
  const Metrics again = compute_metrics(rows, s.settle_time);
  EXPECT_EQ(again.values(), r.metrics.values());
  // Steady hold before the step.
  EXPECT_LT(r.metrics.ee_pos_max, 0.01);
  EXPECT_EQ(r.metrics.ik_hold_fraction, 0.0);
}

TEST(Simulation, SameSeedIsBitIdenticalAndSeedMatters) {
  const fs::path a = scratch("det_a"), b = scratch("det_b"), c = scratch("det_c");
  Scenario s = short_run("ex1_circle.cfg", 2.0);
  run_scenario(s, {a, false});
  run_scenario(s, {b, false});
  s.seed = 99;
  run_scenario(s, {c, false});
  const std::string ts = s.name + "_timeseries.csv";
  EXPECT_EQ(slurp(a / ts), slurp(b / ts));
  EXPECT_EQ(slurp(a / (s.name + "_metrics.csv")), slurp(b / (s.name + "_metrics.csv")));
  EXPECT_NE(slurp(a / ts), slurp(c / ts));
}

TEST(Simulation, RneDumpIsOptional) {
  const fs::path out = scratch("dump");
  run_scenario(short_run("ex3_sine.cfg", 1.5), {out, true});
  int files = 0;
  for (const auto& e : fs::directory_iterator(out)) files += e.path().extension() == ".csv";
  EXPECT_EQ(files, 3);
}

TEST(Compare, IdenticalScenariosGiveZeroReduction) {
  const Scenario s = short_run("ex3_step.cfg", 2.0);
  const auto rows = compare({s, s}, {});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_DOUBLE_EQ(rows[1].ee_pos_reduction, 0.0);
  EXPECT_DOUBLE_EQ(rows[1].base_pos_reduction, 0.0);
}

TEST(Compare, RejectsScenariosThatDifferInMoreThanRunFlags) {
  Scenario a = short_run("ex3_step.cfg", 2.0);
  Scenario b = a;
  b.source.set("disturbance.amplitude", "5");
  EXPECT_THROW(compare({a, b}, {}), ConfigError);
  EXPECT_THROW(compare({a}, {}), ConfigError);
  EXPECT_TRUE(is_run_flag("coupling.ablate"));
  EXPECT_FALSE(is_run_flag("dt"));
}

TEST(Compare, WritesComparisonTable) {
  const fs::path out = scratch("compare");
  Scenario a = short_run("ex3_step.cfg", 2.0);
  Scenario b = a;
  b.name = "ex3_step_ablated";
  b.ablate_coupling = true;
  b.source.set("coupling.ablate", "true");
  b.source.set("name", b.name);
  const auto rows = compare({a, b}, out);
  ASSERT_TRUE(fs::exists(out / "comparison.csv"));
  const auto text = slurp(out / "comparison.csv");
  EXPECT_NE(text.find("ee_pos_reduction_pct"), std::string::npos);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
  EXPECT_LT(rows[0].metrics.ee_pos_mean, rows[1].metrics.ee_pos_mean);
}

TEST(Analyze, DesignReportsTheSizedArm) {
  const fs::path out = scratch("design");
  const auto files = analyze(AnalysisKind::Design, {}, out);
  ASSERT_EQ(files.size(), 1u);
  const auto rows = read_timeseries(files[0]);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(rows[0][3], 0.547, 0.003);  // total_length
  EXPECT_DOUBLE_EQ(rows[0].back(), 1.0);  // coverage
}

TEST(Analyze, AmplificationAndWorkspaceReports) {
  const fs::path out = scratch("analyze");
  const auto amp = analyze(AnalysisKind::Amplification, {{"n", "300"}, {"seed", "2"}}, out);
  EXPECT_EQ(amp.size(), 2u);
  const auto summary = read_timeseries(out / "amplification_summary.csv");
  ASSERT_EQ(summary.size(), 2u);
  EXPECT_EQ(summary[0][0], 0.0);
  EXPECT_EQ(summary[1][0], 1.0);
  const auto ws = analyze(AnalysisKind::Workspace, {{"n", "2000"}}, out);
  EXPECT_EQ(ws.size(), 2u);
  EXPECT_EQ(read_timeseries(out / "workspace_cloud.csv").size(), 2000u);
}

TEST(Analyze, ParameterErrors) {
  const fs::path out = scratch("analyze_err");
  EXPECT_THROW(analyze(AnalysisKind::Design, {{"colour", "red"}}, out), ConfigError);
  EXPECT_THROW(analyze(AnalysisKind::Amplification, {{"n", "many"}}, out), ConfigError);
  EXPECT_THROW(analyze(AnalysisKind::Workspace, {{"n", "0"}}, out), ConfigError);
  EXPECT_THROW(parse_analysis_kind("spectrum"), ConfigError);
}

TEST(Configs, EveryBundledScenarioParses) {
  for (const auto& e : fs::directory_iterator(configs())) {
    const auto name = e.path().filename().string();
    if (name.rfind("ex", 0) != 0 || e.path().extension() != ".cfg") continue;
    EXPECT_NO_THROW(load_scenario(e.path())) << name;
  }
}
