// Diagnostic only (not an acceptance criterion): the Monte Carlo table with
// the true attitude in place of the reconstruction R̄ and a 1 ms measurement
// period, checked against the same bands as acc_table1.
#include "acceptance.hpp"
#include "rotobs/analysis/montecarlo.hpp"

#include <cmath>
#include <string>

using namespace rotobs;
using rotobs::testing::fmt_g;

int main() {
  rotobs::testing::Verdict v("table1-diagnostic (true attitude, h_meas = 1 ms)");
  MonteCarloConfig cfg;
  cfg.sim.noise.enabled = true;
  cfg.sim.noise.h_meas = 0.001;
  cfg.sim.attitude_reference = AttitudeReference::True;
  const RmseReport r = monte_carlo_rmse(100, 7, cfg);

  const auto p1 = ObserverVariant::AngularMomentum;
  const auto p2 = ObserverVariant::Complementary;
  const auto p4 = ObserverVariant::Fused;
  auto cell = [&](ObserverVariant o, const char* w, ErrorSignal s) { return r.rmse(o, w, s); };
  const double w4 = cell(p4, "stationary", ErrorSignal::Omega);
  const double b4 = cell(p4, "stationary", ErrorSignal::Bias);
  const double w2 = cell(p2, "stationary", ErrorSignal::Omega);
  const double b1 = cell(p1, "stationary", ErrorSignal::Bias);
  v.require(r.failures.empty(), std::to_string(r.failures.size()) + " failed runs");
  v.require(w4 >= 0.011 && w4 <= 0.032, "obs4 stationary omega " + fmt_g(w4));
  v.require(b4 >= 0.008 && b4 <= 0.024, "obs4 stationary bias " + fmt_g(b4));
  v.require(w2 > 5.0 * w4, "obs2/obs4 stationary omega " + fmt_g(w2 / w4) + " > 5");
  v.require(b1 > 5.0 * b4, "obs1/obs4 stationary bias " + fmt_g(b1 / b4) + " > 5");
  std::string psi;
  for (auto o : {p1, p2, p4}) {
    const double x = cell(o, "stationary", ErrorSignal::Psi);
    psi += " obs" + std::to_string(variant_number(o)) + "=" + fmt_g(x);
    v.require(x < 1e-4, "stationary psi " + fmt_g(x) + " < 1e-4");
  }
  const double ref[3] = {0.56, 2.4, 2.3};
  std::string tr;
  for (int s = 0; s < kSignalCount; ++s) {
    const double x = cell(p4, "transient", static_cast<ErrorSignal>(s));
    tr += " " + fmt_g(x);
    v.require(std::isfinite(x) && x >= ref[s] / 3 && x <= ref[s] * 3,
              "obs4 transient " + signal_name(static_cast<ErrorSignal>(s)) + " " + fmt_g(x));
  }
  v.note("obs4 stationary omega=" + fmt_g(w4) + " bias=" + fmt_g(b4) + "; obs2 omega=" +
         fmt_g(w2) + "; obs1 bias=" + fmt_g(b1) + "; stationary psi" + psi +
         "; obs4 transient" + tr);
  return v.finish();
}
