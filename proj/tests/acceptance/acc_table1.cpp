// Monte Carlo RMSE table: 100 sampled scenarios, seed 7, noisy measurements
// (σ = 0.1, 2 ms zero-order hold), observers 1, 2 and 4.
#include "acceptance.hpp"
#include "rotobs/analysis/montecarlo.hpp"

#include <cmath>
#include <string>

using namespace rotobs;
using rotobs::testing::fmt_g;

int main() {
  rotobs::testing::Verdict v("table1");
  const rotobs::testing::Stopwatch clock;

  MonteCarloConfig cfg;
  cfg.sim.noise.enabled = true;
  const RmseReport r = monte_carlo_rmse(100, 7, cfg);
  const double runtime = clock.seconds();

  const auto p1 = ObserverVariant::AngularMomentum;
  const auto p2 = ObserverVariant::Complementary;
  const auto p4 = ObserverVariant::Fused;
  auto cell = [&](ObserverVariant o, const char* w, ErrorSignal s) { return r.rmse(o, w, s); };

  const double w4 = cell(p4, "stationary", ErrorSignal::Omega);
  const double b4 = cell(p4, "stationary", ErrorSignal::Bias);
  const double w2 = cell(p2, "stationary", ErrorSignal::Omega);
  const double b1 = cell(p1, "stationary", ErrorSignal::Bias);

  v.require(r.failures.empty(), std::to_string(r.failures.size()) + " failed runs");
  v.require(w4 >= 0.011 && w4 <= 0.032, "obs4 stationary omega " + fmt_g(w4) + " in [0.011,0.032]");
  v.require(b4 >= 0.008 && b4 <= 0.024, "obs4 stationary bias " + fmt_g(b4) + " in [0.008,0.024]");
  v.require(w2 > 5.0 * w4, "obs2 stationary omega " + fmt_g(w2) + " > 5x obs4 " + fmt_g(w4));
  v.require(b1 > 5.0 * b4, "obs1 stationary bias " + fmt_g(b1) + " > 5x obs4 " + fmt_g(b4));

  for (auto o : {p1, p2, p4}) {
    const double psi = cell(o, "stationary", ErrorSignal::Psi);
    v.require(psi < 1e-4, "obs" + std::to_string(variant_number(o)) + " stationary psi " +
                              fmt_g(psi) + " < 1e-4");
  }
  // Transient reference values (observer 4): Ψ 0.56, ω̃ 2.4, b̃ 2.3.
  const double ref[3] = {0.56, 2.4, 2.3};
  for (auto o : {p1, p2, p4}) {
    for (int s = 0; s < kSignalCount; ++s) {
      const double x = cell(o, "transient", static_cast<ErrorSignal>(s));
      const std::string label = "obs" + std::to_string(variant_number(o)) + " transient " +
                                signal_name(static_cast<ErrorSignal>(s)) + " " + fmt_g(x);
      v.require(std::isfinite(x), label + " finite");
      if (o == p4)
        v.require(x >= ref[s] / 3.0 && x <= ref[s] * 3.0,
                  label + " within 3x of " + fmt_g(ref[s]));
    }
  }
  v.require(runtime < 120.0, "runtime " + fmt_g(runtime) + " s < 120 s");

  std::string table;
  for (auto o : {p1, p2, p4}) {
    table += " obs" + std::to_string(variant_number(o)) + "{";
    for (const char* w : {"stationary", "transient"})
      for (int s = 0; s < kSignalCount; ++s)
        table += std::string(w).substr(0, 4) + "." + signal_name(static_cast<ErrorSignal>(s)) +
                 "=" + fmt_g(cell(o, w, static_cast<ErrorSignal>(s))) + " ";
    table += "}";
  }
  v.note("runtime=" + fmt_g(runtime) + "s" + table);
  return v.finish();
}
