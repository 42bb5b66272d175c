#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "aero/config.hpp"
#include "aero/errors.hpp"
#include "aero/units.hpp"

using namespace aero;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code;
  std::string output;  // stdout and stderr combined
};

CliResult run_cli(const std::string& args) {
  const fs::path log = fs::temp_directory_path() / "aero_cli_test.log";
  const std::string cmd = std::string(AEROBENCH_EXE) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream is(log);
  std::stringstream ss;
  ss << is.rdbuf();
  return {WEXITSTATUS(status), ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / name;
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST(Config, DefaultsWhenEmpty) {
  const RunConfig cfg = parse_run_config("{}");
  EXPECT_EQ(cfg.controller, "lqi");
  EXPECT_EQ(cfg.plant.params.c_theta, 0.8185);
  EXPECT_EQ(cfg.mpc.horizon, 60);
  EXPECT_EQ(cfg.ppo.n_steps, 2048);
  EXPECT_EQ(cfg.targets.size(), 8u);
  EXPECT_NO_THROW(cfg.validate());
}

TEST(Config, AnglesAreDegrees) {
  const RunConfig cfg = parse_run_config(R"({"plant": {"theta_limit_deg": 60, "imbalance": 0.05}})");
  EXPECT_NEAR(cfg.plant.params.theta_limit, deg_to_rad(60.0), 1e-15);
  EXPECT_EQ(cfg.plant.params.imbalance, 0.05);
}

TEST(Config, RejectsUnknownKeysAndBadTypes) {
  EXPECT_THROW(parse_run_config(R"({"plnat": {}})"), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"plant": {"c_thta": 1}})"), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"plant": {"c_theta": "big"}})"), ConfigError);
  EXPECT_THROW(parse_run_config("{not json"), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"mpc": {"horizon": 0}})"), ConfigError);
}

TEST(Config, ScenarioSpecs) {
  EXPECT_EQ(make_scenario("sequence").duration, 80.0);
  const auto s = make_scenario("step:-20");
  EXPECT_EQ(s.step_target_deg, -20.0);
  EXPECT_EQ(s.duration, 70.0);
  EXPECT_THROW(make_scenario("ramp"), ConfigError);
  EXPECT_THROW(make_scenario("step:abc"), ConfigError);
  EXPECT_THROW(make_scenario("step:0"), ConfigError);
}

TEST(Config, ControllerFactory) {
  const RunConfig cfg;
  EXPECT_EQ(controller_factory(cfg, "lqi")()->name(), "lqi");
  EXPECT_EQ(controller_factory(cfg, "mpc")()->period(), 0.02);
  EXPECT_EQ(controller_factory(cfg, "zero")()->control(0.1, 0.2, 0.0), 0.0);
  EXPECT_THROW(controller_factory(cfg, "pid"), ConfigError);
  EXPECT_THROW(controller_factory(cfg, "ppo"), ConfigError);  // no checkpoint configured
}

TEST(Cli, HelpExitsZero) {
  EXPECT_EQ(run_cli("--help").exit_code, 0);
  for (const char* sub : {"simulate", "identify", "synthesize", "train", "evaluate", "compare"}) {
    const auto r = run_cli(std::string(sub) + " --help");
    EXPECT_EQ(r.exit_code, 0) << sub;
    EXPECT_NE(r.output.find("--seed"), std::string::npos) << sub;
  }
}

TEST(Cli, InvalidControllerFails) {
  const fs::path out = fresh_dir("aero_cli_bad");
  const auto r = run_cli("simulate --controller pid --out " + out.string());
  EXPECT_NE(r.exit_code, 0);
  EXPECT_NE(r.output.find("pid"), std::string::npos);
}

TEST(Cli, SimulateWritesEightThousandRows) {
  const fs::path out = fresh_dir("aero_cli_sim");
  ASSERT_EQ(run_cli("simulate --controller lqi --out " + out.string()).exit_code, 0);
  const fs::path trace = out / "traces" / "lqi_sequence.csv";
  ASSERT_TRUE(fs::exists(trace));
  std::ifstream is(trace);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "t,r,y,u");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 8000);
}

TEST(Cli, SameSeedByteIdentical) {
  const fs::path cfg_path = fs::temp_directory_path() / "aero_cli_noise.json";
  std::ofstream(cfg_path) << R"({"plant": {"noise_std_deg": 0.1}})";
  const fs::path a = fresh_dir("aero_cli_seed_a"), b = fresh_dir("aero_cli_seed_b"), c = fresh_dir("aero_cli_seed_c");
  const std::string base = "simulate --controller mpc --scenario step:10 --config " + cfg_path.string();
  ASSERT_EQ(run_cli(base + " --seed 7 --out " + a.string()).exit_code, 0);
  ASSERT_EQ(run_cli(base + " --seed 7 --out " + b.string()).exit_code, 0);
  ASSERT_EQ(run_cli(base + " --seed 8 --out " + c.string()).exit_code, 0);
  const std::string ta = slurp(a / "traces" / "mpc_step_10.csv");
  EXPECT_FALSE(ta.empty());
  EXPECT_EQ(ta, slurp(b / "traces" / "mpc_step_10.csv"));
  EXPECT_NE(ta, slurp(c / "traces" / "mpc_step_10.csv"));
}

TEST(Cli, UnknownConfigKeyFails) {
  const fs::path cfg_path = fs::temp_directory_path() / "aero_cli_typo.json";
  std::ofstream(cfg_path) << R"({"plant": {"c_thta": 1.0}})";
  const auto r = run_cli("synthesize --config " + cfg_path.string() + " --out " + fresh_dir("aero_cli_typo").string());
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.output.find("c_thta"), std::string::npos);
}

TEST(Cli, SynthesizeWritesGains) {
  const fs::path out = fresh_dir("aero_cli_synth");
  ASSERT_EQ(run_cli("synthesize --out " + out.string()).exit_code, 0);
  const std::string gains = slurp(out / "gains.json");
  EXPECT_NE(gains.find("248.16"), std::string::npos);
  // Nothing is written outside the output directory.
  for (const auto& e : fs::recursive_directory_iterator(out))
    EXPECT_EQ(e.path().string().rfind(out.string(), 0), 0u);
}
