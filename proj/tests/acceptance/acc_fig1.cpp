// Fixed example, fused observer (variant 4), noise-free: errors at t = 10 s,
// decay of V₁ over [5, 10] and runtime.
#include "acceptance.hpp"
#include "rotobs/analysis/simulation.hpp"
#include "rotobs/rng.hpp"

#include <cmath>

using namespace rotobs;
using rotobs::testing::fmt_g;

int main() {
  rotobs::testing::Verdict v("fig1");
  const rotobs::testing::Stopwatch clock;

  const Scenario sc = paper_scenario(default_weights());
  SimulationConfig cfg;  // defaults: noise off, continuous sampling, 10 s
  Rng rng = make_stream(7, 0);
  const auto rec = simulate_records(sc, cfg, {ObserverVariant::Fused}, rng);
  const double runtime = clock.seconds();
  const auto& rows = rec.front().rows;
  const SampleRow& last = rows.back();

  const double psi = std::abs(last.psi);
  const double b = last.error.b_tilde.norm();
  const double w = last.error.omega_tilde.norm();
  v.require(std::abs(last.t - 10.0) < 1e-9, "final time " + fmt_g(last.t));
  v.require(psi < 1e-3, "|psi(10)| = " + fmt_g(psi) + " < 1e-3");
  v.require(b < 1e-2, "|b_tilde(10)| = " + fmt_g(b) + " < 1e-2");
  v.require(w < 1e-2, "|omega_tilde(10)| = " + fmt_g(w) + " < 1e-2");

  // Least-squares slope of log10 V₁ against t on [5, 10].
  double n = 0, st = 0, sy = 0, stt = 0, sty = 0;
  bool finite = true;
  for (const SampleRow& r : rows) {
    if (r.t < 5.0 - 1e-9) continue;
    if (!(r.v1 > 0.0)) {
      finite = false;
      continue;
    }
    const double y = std::log10(r.v1);
    n += 1;
    st += r.t;
    sy += y;
    stt += r.t * r.t;
    sty += r.t * y;
  }
  const double slope = (n * sty - st * sy) / (n * stt - st * st);
  v.require(finite, "V1 positive on [5, 10]");
  v.require(slope < 0.0, "slope of log10 V1 on [5,10] = " + fmt_g(slope) + " < 0");
  v.require(runtime < 5.0, "runtime " + fmt_g(runtime) + " s < 5 s");

  v.note("|psi|=" + fmt_g(psi) + " |b~|=" + fmt_g(b) + " |w~|=" + fmt_g(w) +
         " slope=" + fmt_g(slope) + " runtime=" + fmt_g(runtime) + "s");
  return v.finish();
}
