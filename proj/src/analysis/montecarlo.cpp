#include "rotobs/analysis/montecarlo.hpp"

#include "rotobs/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <thread>

namespace rotobs {

std::string signal_name(ErrorSignal s) {
  switch (s) {
    case ErrorSignal::Psi:
      return "psi";
    case ErrorSignal::Omega:
      return "omega";
    case ErrorSignal::Bias:
      return "bias";
  }
  return "?";
}

std::vector<TimeWindow> default_windows(double duration) {
  return {{"transient", 0.0, duration}, {"stationary", std::max(0.0, duration - 1.0), duration}};
}

double RmseReport::rmse(ObserverVariant variant, const std::string& window,
                        ErrorSignal signal) const {
  for (const RmseCell& c : cells) {
    if (c.variant == variant && c.window == window && c.signal == signal) return c.rmse;
  }
  throw std::out_of_range("no RMSE cell for the requested observer/window/signal");
}

double RmseReport::failure_fraction() const {
  return n_runs == 0 ? 0.0 : static_cast<double>(failures.size()) / static_cast<double>(n_runs);
}

namespace {

std::array<double, kSignalCount> squared_signals(const SampleRow& row) {
  return {row.psi * row.psi, row.error.omega_tilde.squaredNorm(),
          row.error.b_tilde.squaredNorm()};
}

/// Window membership with a relative slack so grid points that land on a
/// window boundary up to rounding are included.
bool in_window(double t, const TimeWindow& w) {
  const double tol = 1e-9 * std::max(1.0, std::abs(w.end));
  return t >= w.start - tol && t <= w.end + tol;
}

}  // namespace

std::vector<std::array<double, kSignalCount>> window_integrals(
    const std::vector<SampleRow>& rows, const std::vector<TimeWindow>& windows) {
  std::vector<std::array<double, kSignalCount>> out(windows.size(),
                                                    std::array<double, kSignalCount>{});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto a = squared_signals(rows[i - 1]);
    const auto b = squared_signals(rows[i]);
    const double dt = rows[i].t - rows[i - 1].t;
    for (std::size_t w = 0; w < windows.size(); ++w) {
      if (!in_window(rows[i - 1].t, windows[w]) || !in_window(rows[i].t, windows[w])) continue;
      for (int s = 0; s < kSignalCount; ++s) out[w][s] += 0.5 * dt * (a[s] + b[s]);
    }
  }
  return out;
}

namespace {

struct RunOutcome {
  std::vector<RunIntegrals> integrals;
  std::optional<std::string> failure;
};

RunOutcome run_one(std::size_t run, std::uint64_t seed, const MonteCarloConfig& cfg,
                   const std::vector<TimeWindow>& windows) {
  RunOutcome out;
  try {
    Rng rng = make_stream(seed, run);
    const Scenario sc = sample_scenario(rng, cfg.weights);
    std::vector<std::vector<SampleRow>> rows(cfg.variants.size());
    simulate(sc, cfg.sim, cfg.variants, rng, [&](ObserverVariant v, const SampleRow& row) {
      const auto idx = static_cast<std::size_t>(
          std::find(cfg.variants.begin(), cfg.variants.end(), v) - cfg.variants.begin());
      rows[idx].push_back(row);
    });
    for (std::size_t i = 0; i < cfg.variants.size(); ++i) {
      RunIntegrals ri{run, cfg.variants[i], window_integrals(rows[i], windows)};
      for (const auto& w : ri.integrals) {
        for (const double x : w) {
          if (!std::isfinite(x)) throw NonFiniteState("non-finite error integral", 0.0);
        }
      }
      out.integrals.push_back(std::move(ri));
    }
  } catch (const std::exception& e) {
    out.integrals.clear();
    out.failure = e.what();
  }
  return out;
}

}  // namespace

RmseReport monte_carlo_rmse(std::size_t n_runs, std::uint64_t seed, const MonteCarloConfig& cfg) {
  if (n_runs < 1) throw InvalidConfig("at least one Monte Carlo run is required");
  if (cfg.variants.empty()) throw InvalidConfig("no observer selected");
  cfg.sim.validate();

  RmseReport report;
  report.n_runs = n_runs;
  report.seed = seed;
  report.windows = default_windows(cfg.sim.integrator.duration);

  std::vector<RunOutcome> outcomes(n_runs);
  unsigned threads = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_runs)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < n_runs; k = next++) {
      outcomes[k] = run_one(k, seed, cfg, report.windows);
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  // Ordered reduction by run index.
  const std::size_t n_windows = report.windows.size();
  std::vector<std::vector<std::array<double, kSignalCount>>> sums(
      cfg.variants.size(),
      std::vector<std::array<double, kSignalCount>>(n_windows, std::array<double, kSignalCount>{}));
  std::size_t n_ok = 0;
  for (std::size_t k = 0; k < n_runs; ++k) {
    RunOutcome& o = outcomes[k];
    if (o.failure) {
      report.failures.push_back({k, *o.failure});
      continue;
    }
    ++n_ok;
    for (std::size_t v = 0; v < o.integrals.size(); ++v) {
      for (std::size_t w = 0; w < n_windows; ++w) {
        for (int s = 0; s < kSignalCount; ++s) sums[v][w][s] += o.integrals[v].integrals[w][s];
      }
      report.runs.push_back(std::move(o.integrals[v]));
    }
  }

  for (std::size_t v = 0; v < cfg.variants.size(); ++v) {
    for (std::size_t w = 0; w < n_windows; ++w) {
      for (int s = 0; s < kSignalCount; ++s) {
        const double mean =
            n_ok == 0 ? std::nan("") : sums[v][w][s] / static_cast<double>(n_ok);
        report.cells.push_back({cfg.variants[v], report.windows[w].name,
                                static_cast<ErrorSignal>(s), std::sqrt(mean)});
      }
    }
  }
  return report;
}

}  // namespace rotobs
