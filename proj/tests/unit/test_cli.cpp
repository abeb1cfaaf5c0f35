#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fracar/cli.hpp"
#include "fracar/snapshot_io.hpp"

namespace fracar::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("fracar_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int call(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return main(args, out_, err_);
  }

  fs::path write_config(const std::string& text) {
    const fs::path p = dir_ / "config.ini";
    std::ofstream(p) << text;
    return p;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, RunWritesScheduleAndMetadata) {
  const fs::path out = dir_ / "run";
  ASSERT_EQ(call({"run", "--scenario", "freeway", "--alpha", "0.9", "--delta", "0.9", "--out-dir",
                  out.string()}),
            kOk)
      << err_.str();
  for (double t : {0.0, 1.0, 20.0, 40.0, 60.0}) {
    EXPECT_TRUE(fs::exists(out / snapshot_file_name(t))) << t;
  }
  EXPECT_TRUE(fs::exists(out / "metadata.ini"));
  EXPECT_FALSE(fs::exists(out / "plot.gp"));
  const fracar::Setup back = load_config_file((out / "metadata.ini").string());
  EXPECT_EQ(back.sim.alpha, 0.9);
}

TEST_F(CliTest, CongestionSameSchedule) {
  const fs::path out = dir_ / "run";
  ASSERT_EQ(call({"run", "--scenario", "congestion", "--alpha", "1", "--delta", "0.2",
                  "--out-dir", out.string(), "--gnuplot"}),
            kOk);
  std::size_t csv = 0;
  for (const auto& e : fs::directory_iterator(out)) csv += e.path().extension() == ".csv";
  EXPECT_EQ(csv, 5u);
  EXPECT_TRUE(fs::exists(out / "plot.gp"));
}

TEST_F(CliTest, ZeroHorizonSingleSnapshot) {
  const fs::path out = dir_ / "run";
  ASSERT_EQ(call({"run", "--t-end", "0", "--out-dir", out.string()}), kOk);
  std::size_t csv = 0;
  for (const auto& e : fs::directory_iterator(out)) csv += e.path().extension() == ".csv";
  EXPECT_EQ(csv, 1u);
  const fracar::Setup s;
  const SnapshotFile f = read_snapshot_csv(out / snapshot_file_name(0.0));
  const Snapshot init = make_snapshot(initial_grid(s).grid, 0.0, s.closures());
  for (std::size_t i = 0; i < init.size(); ++i) {
    EXPECT_NEAR(f.snapshot.rho_m[i], init.rho_m[i], 1e-9 * init.rho_m[i]);
  }
}

TEST_F(CliTest, OutputIsByteIdenticalAcrossRuns) {
  ASSERT_EQ(call({"run", "--scenario", "congestion", "--alpha", "0.8", "--t-end", "20",
                  "--out-dir", (dir_ / "a").string()}),
            kOk);
  ASSERT_EQ(call({"run", "--scenario", "congestion", "--alpha", "0.8", "--t-end", "20",
                  "--out-dir", (dir_ / "b").string()}),
            kOk);
  for (double t : {0.0, 1.0, 20.0}) {
    const std::string name = snapshot_file_name(t);
    EXPECT_EQ(slurp(dir_ / "a" / name), slurp(dir_ / "b" / name)) << name;
  }
}

TEST_F(CliTest, EnvironmentSuppliesDefaultDirectory) {
  const fs::path out = dir_ / "from_env";
  ::setenv("FRACAR_OUT_DIR", out.string().c_str(), 1);
  EXPECT_EQ(default_out_dir(), out);
  ASSERT_EQ(call({"run", "--t-end", "0"}), kOk);
  ::unsetenv("FRACAR_OUT_DIR");
  EXPECT_TRUE(fs::exists(out / snapshot_file_name(0.0)));
  EXPECT_EQ(default_out_dir(), fs::path("fracar_out"));
}

TEST_F(CliTest, ConfigAndFlags) {
  const fs::path cfg = write_config("[simulation]\nalpha = 0.8\nsimulation_time = 2\n");
  EXPECT_EQ(call({"run", "--config", cfg.string(), "--alpha", "0.9"}), kUsage);
  EXPECT_NE(err_.str().find("simulation.alpha"), std::string::npos);
  // Agreeing with the file, or setting what the file leaves open, is fine.
  Overrides agree;
  agree.alpha = 0.8;
  agree.delta = 0.3;
  const fracar::Setup s = resolve_setup(cfg.string(), agree);
  EXPECT_EQ(s.sim.alpha, 0.8);
  EXPECT_EQ(s.road.delta, 0.3);
  EXPECT_EQ(s.sim.output_times, (std::vector<double>{0.0, 1.0}));
  Overrides horizon;
  horizon.t_end = 5.0;
  EXPECT_THROW(resolve_setup(cfg.string(), horizon), UsageError);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(call({"run", "--alpha", "1.5"}), kUsage);
  EXPECT_EQ(call({"run", "--delta", "1.0"}), kUsage);
  EXPECT_EQ(call({"run", "--scenario", "rush"}), kUsage);
  EXPECT_EQ(call({"run", "--scenario", "custom"}), kUsage);
  EXPECT_EQ(call({"run", "--unknown"}), kUsage);
  EXPECT_EQ(call({"run", "--config", (dir_ / "missing.ini").string()}), kUsage);
  EXPECT_EQ(call({}), kUsage);
  EXPECT_EQ(call({"validate", "--suite", "nope"}), kUsage);
  EXPECT_EQ(call({"--help"}), kOk);
  EXPECT_NE(out_.str().find("sweep"), std::string::npos);
}

TEST_F(CliTest, SolverAbortExitCode) {
  // An enormous time step passes validation and blows up.
  const fs::path cfg =
      write_config("[simulation]\ntime_step = 50\nsimulation_time = 5000\n[scenario]\nname = "
                   "congestion\n");
  const int rc = call({"run", "--config", cfg.string(), "--out-dir", (dir_ / "x").string()});
  EXPECT_EQ(rc, kSolverAbort) << err_.str();
  EXPECT_NE(err_.str().find("step"), std::string::npos);
}

TEST_F(CliTest, SweepDefaultFourOrders) {
  const fs::path out = dir_ / "sweep";
  ASSERT_EQ(call({"sweep", "--scenario", "congestion", "--out-dir", out.string()}), kOk);
  for (const char* a : {"alpha_1", "alpha_0.9", "alpha_0.8", "alpha_0.7"}) {
    EXPECT_TRUE(fs::exists(out / a / snapshot_file_name(60.0))) << a;
  }
  const std::string table = slurp(out / "comparison.csv");
  EXPECT_EQ(table, out_.str());
  std::istringstream in(table);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "alpha,t,spread,mass_m,mass_c");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 20u);
}

TEST_F(CliTest, SweepSpreadAndMass) {
  fracar::Setup s;
  s.scenario.kind = ScenarioKind::congestion;
  const auto rows = execute_sweep(s, {1.0, 0.7}, dir_ / "s", false);
  ASSERT_EQ(rows.size(), 10u);
  EXPECT_NEAR(rows[0].spread, 0.7, 1e-15);
  EXPECT_LT(rows[9].spread, rows[4].spread);  // alpha 0.7 vs 1 at T = 60
  for (const auto& r : rows) {
    EXPECT_NEAR(r.mass_m, rows[0].mass_m, 1e-10 * rows[0].mass_m);
    EXPECT_NEAR(r.mass_c, rows[0].mass_c, 1e-10 * rows[0].mass_c);
  }
}

TEST_F(CliTest, SingleOrderSweepMatchesRun) {
  ASSERT_EQ(call({"sweep", "--alphas", "0.8", "--t-end", "20", "--out-dir",
                  (dir_ / "s").string()}),
            kOk);
  ASSERT_EQ(call({"run", "--alpha", "0.8", "--t-end", "20", "--out-dir", (dir_ / "r").string()}),
            kOk);
  for (double t : {0.0, 1.0, 20.0}) {
    const std::string name = snapshot_file_name(t);
    EXPECT_EQ(slurp(dir_ / "s" / "alpha_0.8" / name), slurp(dir_ / "r" / name));
  }
  const fs::path cfg = write_config("[simulation]\nalpha = 0.8\n");
  EXPECT_EQ(call({"sweep", "--config", cfg.string(), "--alphas", "1,0.9"}), kUsage);
}

TEST_F(CliTest, ValidateSuiteFilter) {
  ASSERT_EQ(call({"validate", "--suite", "caputo"}), kOk);
  const std::string csv = out_.str();
  EXPECT_NE(csv.find("caputo.l1_affine_exact"), std::string::npos);
  EXPECT_EQ(csv.find("roe."), std::string::npos);
  EXPECT_EQ(csv.find(",FAIL"), std::string::npos);
}

TEST_F(CliTest, ConvergeReportsOrders) {
  ASSERT_EQ(call({"converge", "--alpha", "0.9", "--dx", "50", "--dt", "0.5", "--t-end", "5",
                  "--levels", "2", "--reference-factor", "8"}),
            kOk)
      << err_.str();
  EXPECT_EQ(out_.str().substr(0, 15), "dx,error,order\n");
}

TEST(AlphaDirectory, Naming) {
  EXPECT_EQ(alpha_directory(1.0), "alpha_1");
  EXPECT_EQ(alpha_directory(0.7), "alpha_0.7");
}

}  // namespace
}  // namespace fracar::cli
