#pragma once

#include "rotobs/analysis/linearization.hpp"
#include "rotobs/analysis/montecarlo.hpp"
#include "rotobs/analysis/simulation.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rotobs::app {

/// Configuration error with a location; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ScenarioSource { Paper, Sampled, Explicit };

/// Explicit scenario values. Attitudes may be given as rotation matrices
/// (projected onto SO(3)) or quaternions (normalized).
struct ExplicitScenario {
  Mat3 r0 = Mat3::Identity();
  Vec3 omega0 = Vec3::Zero();
  Vec3 bias = Vec3::Zero();
  Mat3 r_hat0 = Mat3::Identity();
  Vec3 b_hat0 = Vec3::Zero();
  Vec3 l_hat0 = Vec3::Zero();
  Mat3 inertia = Mat3::Identity();
  Vec3 v1 = Vec3(0.0, 0.0, -1.0);
  Vec3 v2 = Vec3(1.0, 0.0, 0.0);
};

struct LinearizeSettings {
  std::vector<double> alpha_grid;  // default 0.05, 0.10, ..., 0.95
  std::vector<double> omega_grid;  // default 200 log-spaced points on [1e-2, 1e3]
  int channel = 0;
  ObserverVariant variant = ObserverVariant::FusedTrueAttitude;
  /// Attitude of the operating point: the scenario's initial attitude, or I.
  bool identity_attitude = false;
};

struct VerifySettings {
  /// When unset, c₁ and c₂ are estimated from samples.
  std::optional<double> c1;
  std::optional<double> c2;
  double eps_fraction = 0.5;
  std::size_t gamma_samples = 100000;
  std::size_t ules_samples = 2000;
  std::size_t eps1_samples = 100000;
  double eps_bar = 0.5;
};

struct RunConfig {
  ScenarioSource source = ScenarioSource::Paper;
  ExplicitScenario explicit_values;
  std::vector<double> weights = {1.1, 1.2, 1.3};
  /// Observer list; empty means the command's default.
  std::vector<ObserverVariant> observers;
  SimulationConfig sim;
  /// Unset: noise off for simulate, on for montecarlo.
  std::optional<bool> noise_enabled;
  std::uint64_t seed = 7;
  /// Run index of a sampled scenario (matches Monte Carlo run numbering).
  std::uint64_t run = 0;
  std::size_t runs = 100;
  unsigned threads = 0;
  LinearizeSettings linearize;
  VerifySettings verify;
  std::string out_dir = "out";
};

/// Parses a YAML document. Unknown keys and malformed values raise ConfigError
/// naming the key and line. An empty document yields the defaults.
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");
RunConfig load_config(const std::string& path);

/// Generator of a run: make_stream(seed, run). A sampled scenario draws from
/// it first and measurement noise follows, exactly as in Monte Carlo run
/// `run`.
Rng run_stream(const RunConfig& cfg);

/// Builds the scenario described by the configuration; sampled scenarios draw
/// from `rng`.
Scenario build_scenario(const RunConfig& cfg, Rng& rng);

/// "1".."4" or "all" (all four variants).
std::vector<ObserverVariant> parse_observer_list(const std::string& text);

}  // namespace rotobs::app
