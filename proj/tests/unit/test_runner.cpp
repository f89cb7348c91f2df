#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mzsim/errors.hpp"
#include "mzsim/runner.hpp"

namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("mzsim_runner_" + name);
  fs::remove_all(dir);
  return dir;
}

int cli(std::vector<std::string> args, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int code = mzsim::run_cli(args, out, err);
  if (out_text) *out_text = out.str();
  return code;
}

TEST(Runner, Fig7ReportsDiscrimination) {
  const auto o = mzsim::run_scenario(mzsim::default_config(mzsim::Scenario::fig7));
  ASSERT_EQ(o.models.size(), 2u);
  ASSERT_EQ(o.discrimination.size(), 2u);
  EXPECT_EQ(o.discrimination[0].verdict, mzsim::Verdict::pass);
  EXPECT_NE(o.summary.find("PASS"), std::string::npos);
  EXPECT_NEAR(o.expected_delay, (15.0 - 2e-3) / mzsim::kSpeedOfLight, 1e-17);
}

TEST(Runner, SingleModelHasNoDiscrimination) {
  auto cfg = mzsim::default_config(mzsim::Scenario::fig7);
  cfg.model = mzsim::ModelChoice::nonlocal;
  const auto o = mzsim::run_scenario(cfg);
  ASSERT_EQ(o.models.size(), 1u);
  EXPECT_TRUE(o.discrimination.empty());
  ASSERT_TRUE(o.models[0].earliest);
  EXPECT_NEAR(o.models[0].earliest->onset_time, 0.0, 0.5e-9 + 1e-15);
}

TEST(Runner, Fig4bReportsInterferenceAppears) {
  auto cfg = mzsim::default_config(mzsim::Scenario::fig4b);
  cfg.model = mzsim::ModelChoice::local;
  const auto o = mzsim::run_scenario(cfg);
  ASSERT_TRUE(o.models[0].visibility);
  EXPECT_NEAR(o.models[0].visibility->visibility, 1.0, 1e-9);
  EXPECT_NE(o.summary.find("Interference appears"), std::string::npos);
}

TEST(Runner, WritesExpectedFiles) {
  auto cfg = mzsim::default_config(mzsim::Scenario::fig7);
  cfg.output_dir = fresh_dir("fig7").string();
  auto o = mzsim::run_scenario(cfg);
  mzsim::write_outputs(o);
  const fs::path dir = cfg.output_dir;
  EXPECT_TRUE(fs::exists(dir / "fig7_local.csv"));
  EXPECT_TRUE(fs::exists(dir / "fig7_nonlocal.csv"));
  EXPECT_EQ(slurp(dir / "summary.txt"), o.summary);
  const auto csv = slurp(dir / "fig7_local.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "time_s,power_det1,power_det2");
  fs::remove_all(dir);
}

TEST(Runner, ByteIdenticalOutputsOnRepeat) {
  const auto a = fresh_dir("repeat_a");
  const auto b = fresh_dir("repeat_b");
  ASSERT_EQ(cli({"run", "--scenario", "fig7", "--out", a.string()}), mzsim::kExitOk);
  ASSERT_EQ(cli({"run", "--scenario", "fig7", "--out", b.string()}), mzsim::kExitOk);
  for (const auto& f : {"fig7_local.csv", "fig7_nonlocal.csv", "summary.txt"}) {
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Runner, DumpConfigRoundTrips) {
  std::string dumped;
  ASSERT_EQ(cli({"run", "--scenario", "fig4c", "--sim.dt=1e-9", "--network.arm_phase", "0.25",
                 "--dump-config"},
                &dumped),
            mzsim::kExitOk);
  const auto cfg = mzsim::resolve_config(mzsim::parse_config_text(dumped), {});
  EXPECT_EQ(cfg.scenario, mzsim::Scenario::fig4c);
  EXPECT_EQ(cfg.sim.dt, 1e-9);
  EXPECT_EQ(cfg.network.arm_phase, 0.25);
  EXPECT_EQ(mzsim::dump_config(cfg), dumped);

  const auto path = fs::temp_directory_path() / "mzsim_dump.conf";
  std::ofstream(path) << dumped;
  std::string again;
  ASSERT_EQ(cli({"run", "--config", path.string(), "--dump-config"}, &again), mzsim::kExitOk);
  EXPECT_EQ(again, dumped);
  fs::remove(path);
}

TEST(Runner, ExitCodes) {
  EXPECT_EQ(cli({"run", "--scenario", "fig99"}), mzsim::kExitConfigError);
  EXPECT_EQ(cli({"run", "--scenario", "fig7", "--sim.nope=1"}), mzsim::kExitConfigError);
  EXPECT_EQ(cli({"run", "--scenario", "fig7", "stray"}), mzsim::kExitConfigError);
  EXPECT_EQ(cli({"run", "--scenario", "fig7", "--sim.dt"}), mzsim::kExitConfigError);
  EXPECT_EQ(cli({"run", "--config", "/nonexistent/mzsim.conf"}), mzsim::kExitConfigError);
  EXPECT_EQ(cli({}), mzsim::kExitConfigError);
  EXPECT_EQ(cli({"run", "--scenario", "fig7", "--out", "/proc/mzsim_forbidden"}),
            mzsim::kExitRuntimeError);
  std::string help;
  EXPECT_EQ(cli({"--help"}, &help), mzsim::kExitOk);
  EXPECT_NE(help.find("run"), std::string::npos);
}

TEST(Runner, SimulationFailureIsRuntimeError) {
  // validation passes but the quadrature budget cannot meet the tolerance
  const auto dir = fresh_dir("accuracy");
  EXPECT_EQ(cli({"run", "--scenario", "doubleslit_sweep", "--diffraction.min_nodes=3",
                 "--diffraction.max_nodes=9", "--diffraction.tolerance=1e-12",
                 "--diffraction.grid_points=101", "--out", dir.string()}),
            mzsim::kExitRuntimeError);
  fs::remove_all(dir);
}

}  // namespace
