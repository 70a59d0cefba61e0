#pragma once

#include "rotobs/analysis/errors.hpp"
#include "rotobs/observers.hpp"
#include "rotobs/rigid_body.hpp"
#include "rotobs/sensing.hpp"

#include <array>
#include <functional>
#include <vector>

namespace rotobs {

/// How observers see the measurements.
///  Continuous: noise-free outputs evaluated at every RK stage time (the
///    ideal continuous-time setting; requires noise off).
///  ZeroOrderHold: outputs sampled every h_meas and held, and each RK4 step
///    holds its input across the stages.
///  Auto: Continuous when noise is off, ZeroOrderHold otherwise.
enum class SamplingMode { Auto, Continuous, ZeroOrderHold };

/// Attitude used where the observers need R: the reconstruction R̄ from the
/// measured directions (default), or the true attitude (diagnostic).
enum class AttitudeReference { Reconstructed, True };

struct SimulationConfig {
  IntegratorConfig integrator;
  NoiseConfig noise;
  SamplingMode sampling = SamplingMode::Auto;
  TorqueProfile torque = TorqueProfile::sinusoid();
  ObserverGains gains;
  AttitudeReference attitude_reference = AttitudeReference::Reconstructed;

  /// Throws InvalidConfig on inconsistent rates or gains.
  void validate() const;
  /// Auto resolved against the noise setting.
  SamplingMode effective_sampling() const;
};

/// One observer-grid sample of one observer.
struct SampleRow {
  double t = 0.0;
  RigidBodyState truth;
  Vec3 bias = Vec3::Zero();
  ObserverState state;
  /// Reported estimates (variant-dependent, see reported_estimates()).
  Vec3 omega_hat = Vec3::Zero();
  Vec3 b_hat = Vec3::Zero();
  /// Errors of the reported estimates.
  ErrorState error;
  double psi = 0.0;
  std::array<double, 4> psi_equilibria{};
  double v1 = 0.0;
  double r_tilde_norm = 0.0;
  double delta_L_norm = 0.0;
};

using SampleSink = std::function<void(ObserverVariant, const SampleRow&)>;

/// Simulates the truth once and runs every listed observer against the same
/// measurement sequence. Rows are emitted at t = 0, h_obs, ..., N·h_obs for
/// each variant in list order. Noise draws come from `rng`.
/// Throws NonFiniteState or DegenerateMeasurement.
void simulate(const Scenario& scenario, const SimulationConfig& cfg,
              const std::vector<ObserverVariant>& variants, Rng& rng, const SampleSink& sink);

struct RunRecord {
  ObserverVariant variant;
  std::vector<SampleRow> rows;
};

/// Collects every row in memory.
std::vector<RunRecord> simulate_records(const Scenario& scenario, const SimulationConfig& cfg,
                                        const std::vector<ObserverVariant>& variants, Rng& rng);

}  // namespace rotobs
