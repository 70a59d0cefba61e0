#include "commands.hpp"
#include "config.hpp"
#include "csv.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace rotobs;
using namespace rotobs::app;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rotobs_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
}

std::vector<std::string> read_lines(const fs::path& p) {
  std::ifstream f(p);
  std::vector<std::string> lines;
  for (std::string l; std::getline(f, l);) lines.push_back(l);
  return lines;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ROTOBS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, EmptyDocumentGivesDefaults) {
  const RunConfig c = parse_config_text("");
  EXPECT_EQ(c.source, ScenarioSource::Paper);
  EXPECT_EQ(c.weights, (std::vector<double>{1.1, 1.2, 1.3}));
  EXPECT_EQ(c.seed, 7u);
  EXPECT_DOUBLE_EQ(c.sim.gains.k_R, 2.0);
  EXPECT_DOUBLE_EQ(c.sim.gains.k_l, 2.0);
  EXPECT_DOUBLE_EQ(c.sim.gains.k_a, 1.0);
  EXPECT_DOUBLE_EQ(c.sim.gains.k_b, 4.0);
  EXPECT_DOUBLE_EQ(c.sim.gains.alpha, 0.3);
  EXPECT_DOUBLE_EQ(c.sim.integrator.h_truth, 1e-4);
  EXPECT_DOUBLE_EQ(c.sim.integrator.h_obs, 1e-3);
  EXPECT_DOUBLE_EQ(c.sim.integrator.duration, 10.0);
  EXPECT_DOUBLE_EQ(c.sim.noise.sigma, 0.1);
  EXPECT_DOUBLE_EQ(c.sim.noise.h_meas, 0.002);
  EXPECT_EQ(c.sim.torque.kind(), TorqueProfile::Kind::SinusoidPaper);
  EXPECT_EQ(c.runs, 100u);

  // The default scenario is the fixed example.
  Rng rng = run_stream(c);
  const Scenario sc = build_scenario(c, rng);
  const Scenario ref = paper_scenario(c.weights);
  EXPECT_EQ(sc.bias, ref.bias);
  EXPECT_EQ(sc.q_hat0.coeffs(), ref.q_hat0.coeffs());
  EXPECT_EQ(sc.l_hat0, ref.l_hat0);
}

TEST(Config, UnknownKeyReportsLineAndKey) {
  const std::string text =
      "gains:\n"
      "  k_R: 2.0\n"
      "  k_Q: 1.0\n";
  try {
    parse_config_text(text, "cfg.yaml");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("cfg.yaml:3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("gains.k_Q"), std::string::npos) << msg;
  }
  EXPECT_THROW(parse_config_text("bogus: 1\n"), ConfigError);
}

TEST(Config, ParsesValues) {
  const RunConfig c = parse_config_text(
      "gains: {alpha: 0.6}\n"
      "integrator: {duration: 2.5}\n"
      "noise: {enabled: false}\n"
      "observers: [1, 4]\n"
      "seed: 99\n");
  EXPECT_DOUBLE_EQ(c.sim.gains.alpha, 0.6);
  EXPECT_DOUBLE_EQ(c.sim.integrator.duration, 2.5);
  EXPECT_EQ(c.noise_enabled, std::optional<bool>(false));
  ASSERT_EQ(c.observers.size(), 2u);
  EXPECT_EQ(c.observers[1], ObserverVariant::Fused);
  EXPECT_EQ(c.seed, 99u);
  EXPECT_THROW(parse_config_text("gains: {alpha: 2.0}\n"), ConfigError);
  EXPECT_THROW(parse_config_text("gains: {alpha: abc}\n"), ConfigError);
}

TEST(Config, ObserverList) {
  EXPECT_EQ(parse_observer_list("all").size(), 4u);
  EXPECT_EQ(parse_observer_list("2"), std::vector<ObserverVariant>{ObserverVariant::Complementary});
  EXPECT_THROW(parse_observer_list("7"), ConfigError);
}

TEST(Csv, SeventeenSignificantDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0), "1");
  const double x = 2.0 / 3.0;
  EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(Csv, ColumnCountChecked) {
  const fs::path d = scratch_dir("csv");
  CsvWriter w((d / "a.csv").string(), {"a", "b"});
  w.cell(1.0);
  EXPECT_THROW(w.end_row(), std::exception);
}

TEST(Cli, SimulateShortDurationGivesTwoRows) {
  const fs::path d = scratch_dir("sim");
  write_file(d / "c.yaml", "integrator: {duration: 0.001}\n");
  ASSERT_EQ(run_cli("simulate --config " + (d / "c.yaml").string() + " --out " +
                    (d / "out").string() + " --observer 4"),
            kExitOk);
  const auto lines = read_lines(d / "out" / "trajectory_obs4.csv");
  ASSERT_EQ(lines.size(), 3u);  // header + 2 rows
  EXPECT_EQ(lines[0].substr(0, 2), "t,");
  EXPECT_EQ(lines[1].substr(0, 2), "0,");
  EXPECT_NEAR(std::stod(lines[2].substr(0, lines[2].find(','))), 0.001, 1e-15);
}

TEST(Cli, MontecarloWritesEighteenRmseRows) {
  const fs::path d = scratch_dir("mc");
  write_file(d / "c.yaml", "integrator: {duration: 1.0}\n");
  ASSERT_EQ(run_cli("montecarlo --runs 2 --seed 3 --config " + (d / "c.yaml").string() +
                    " --out " + (d / "out").string()),
            kExitOk);
  const auto lines = read_lines(d / "out" / "rmse.csv");
  ASSERT_EQ(lines.size(), 19u);  // header + 3 observers × 2 windows × 3 signals
  EXPECT_EQ(lines[0], "observer,window,signal,rmse,n_runs,seed");
}

TEST(Cli, ExitCodes) {
  const fs::path d = scratch_dir("exit");
  write_file(d / "bad.yaml", "gains:\n  nope: 1\n");
  EXPECT_EQ(run_cli("simulate --config " + (d / "bad.yaml").string() + " --out " +
                    (d / "o1").string()),
            kExitConfig);
  EXPECT_EQ(run_cli("simulate --config " + (d / "missing.yaml").string()), kExitConfig);
  EXPECT_EQ(run_cli("simulate --observer 9"), kExitConfig);
  EXPECT_EQ(run_cli("frobnicate"), kExitConfig);
  // A diverging configuration is a numerical failure.
  write_file(d / "blowup.yaml",
             "integrator: {h_truth: 0.25, h_obs: 0.5, duration: 100}\n"
             "gains: {k_R: 1000, k_l: 1000, k_b: 1000, k_a: 1000}\n");
  EXPECT_EQ(run_cli("simulate --config " + (d / "blowup.yaml").string() + " --out " +
                    (d / "o2").string()),
            kExitNumeric);
}

TEST(Cli, LinearizeWritesOutputs) {
  const fs::path d = scratch_dir("lin");
  ASSERT_EQ(run_cli("linearize --out " + (d / "out").string()), kExitOk);
  const auto eig = read_lines(d / "out" / "eigenvalues.csv");
  EXPECT_EQ(eig.size(), 1u + 19u * 9u);
  const auto sig = read_lines(d / "out" / "sigma.csv");
  EXPECT_EQ(sig.size(), 201u);
}
