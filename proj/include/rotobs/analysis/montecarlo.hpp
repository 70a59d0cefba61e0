#pragma once

#include "rotobs/analysis/simulation.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rotobs {

enum class ErrorSignal { Psi = 0, Omega = 1, Bias = 2 };
inline constexpr int kSignalCount = 3;
std::string signal_name(ErrorSignal s);

struct TimeWindow {
  std::string name;
  double start = 0.0;
  double end = 0.0;
};

/// [0, T] ("transient") and [T − 1, T] ("stationary").
std::vector<TimeWindow> default_windows(double duration);

/// ∫‖x‖² dt over each window for one observer of one run.
struct RunIntegrals {
  std::size_t run = 0;
  ObserverVariant variant = ObserverVariant::Fused;
  /// [window][signal]
  std::vector<std::array<double, kSignalCount>> integrals;
};

struct RunFailure {
  std::size_t run = 0;
  std::string what;
};

struct RmseCell {
  ObserverVariant variant = ObserverVariant::Fused;
  std::string window;
  ErrorSignal signal = ErrorSignal::Psi;
  double rmse = 0.0;
};

struct RmseReport {
  std::size_t n_runs = 0;
  std::uint64_t seed = 0;
  std::vector<TimeWindow> windows;
  /// Ordered by variant, then window, then signal.
  std::vector<RmseCell> cells;
  /// Successful runs in run order, one entry per (run, variant).
  std::vector<RunIntegrals> runs;
  std::vector<RunFailure> failures;

  /// RMSE of one cell; throws std::out_of_range if absent.
  double rmse(ObserverVariant variant, const std::string& window, ErrorSignal signal) const;
  double failure_fraction() const;
};

struct MonteCarloConfig {
  SimulationConfig sim;
  std::vector<ObserverVariant> variants = {ObserverVariant::AngularMomentum,
                                           ObserverVariant::Complementary,
                                           ObserverVariant::Fused};
  std::vector<double> weights = {1.1, 1.2, 1.3};
  /// 0 selects std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Per-window trapezoidal ∫‖x‖² dt of the three error signals along rows.
std::vector<std::array<double, kSignalCount>> window_integrals(
    const std::vector<SampleRow>& rows, const std::vector<TimeWindow>& windows);

/// Runs n_runs sampled scenarios. Run k draws its scenario and noise from
/// make_stream(seed, k); runs execute on a thread pool and are reduced in run
/// order, so the report depends only on (n_runs, seed, config). Failed runs
/// are recorded and excluded from the RMSEs.
RmseReport monte_carlo_rmse(std::size_t n_runs, std::uint64_t seed, const MonteCarloConfig& cfg);

}  // namespace rotobs
