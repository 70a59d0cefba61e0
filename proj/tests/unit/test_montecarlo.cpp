#include "rotobs/analysis/montecarlo.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace rotobs;

TEST(Windows, Defaults) {
  const auto w = default_windows(10.0);
  ASSERT_EQ(w.size(), 2u);
  EXPECT_EQ(w[0].name, "transient");
  EXPECT_EQ(w[1].name, "stationary");
  EXPECT_DOUBLE_EQ(w[1].start, 9.0);
  EXPECT_EQ(signal_name(ErrorSignal::Bias), "bias");
}

TEST(Windows, TrapezoidIntegral) {
  // ψ(t) = t, ω̃ = (1, 0, 0), b̃ = (t, t, 0) on a grid of 0.001 over [0, 2].
  std::vector<SampleRow> rows;
  for (int k = 0; k <= 2000; ++k) {
    SampleRow r;
    r.t = k * 1e-3;
    r.psi = r.t;
    r.error.omega_tilde = Vec3(1, 0, 0);
    r.error.b_tilde = Vec3(r.t, r.t, 0);
    rows.push_back(r);
  }
  const auto in = window_integrals(rows, default_windows(2.0));
  // Trapezoid error on t² is h²/6 per unit length.
  EXPECT_NEAR(in[0][0], 8.0 / 3.0, 1e-6);
  EXPECT_NEAR(in[0][1], 2.0, 1e-12);
  EXPECT_NEAR(in[0][2], 16.0 / 3.0, 2e-6);
  EXPECT_NEAR(in[1][0], 7.0 / 3.0, 1e-6);
  EXPECT_NEAR(in[1][1], 1.0, 1e-9);
}

namespace {

MonteCarloConfig short_config(bool noise) {
  MonteCarloConfig c;
  c.sim.integrator.duration = 2.0;
  c.sim.noise.enabled = noise;
  return c;
}

}  // namespace

TEST(MonteCarlo, SingleRun) {
  const RmseReport r = monte_carlo_rmse(1, 7, short_config(true));
  EXPECT_EQ(r.n_runs, 1u);
  EXPECT_EQ(r.cells.size(), 18u);
  EXPECT_EQ(r.runs.size(), 3u);
  EXPECT_TRUE(r.failures.empty());
  for (const auto& c : r.cells) EXPECT_TRUE(std::isfinite(c.rmse));
}

TEST(MonteCarlo, ThreadCountDoesNotChangeResults) {
  MonteCarloConfig a = short_config(true), b = short_config(true);
  a.threads = 1;
  b.threads = 3;
  const RmseReport ra = monte_carlo_rmse(6, 11, a);
  const RmseReport rb = monte_carlo_rmse(6, 11, b);
  ASSERT_EQ(ra.cells.size(), rb.cells.size());
  for (std::size_t i = 0; i < ra.cells.size(); ++i) EXPECT_EQ(ra.cells[i].rmse, rb.cells[i].rmse);
}

TEST(MonteCarlo, RunsArePrefixStable) {
  // Run k depends only on (seed, k).
  const RmseReport r3 = monte_carlo_rmse(3, 5, short_config(true));
  const RmseReport r5 = monte_carlo_rmse(5, 5, short_config(true));
  for (std::size_t i = 0; i < r3.runs.size(); ++i) {
    EXPECT_EQ(r3.runs[i].run, r5.runs[i].run);
    EXPECT_EQ(r3.runs[i].integrals, r5.runs[i].integrals);
  }
}

TEST(MonteCarlo, NoiseFreeStationaryErrorsVanish) {
  MonteCarloConfig c;
  c.sim.noise.enabled = false;
  c.variants = {ObserverVariant::Fused};
  const RmseReport r = monte_carlo_rmse(5, 7, c);
  EXPECT_TRUE(r.failures.empty());
  for (ErrorSignal s : {ErrorSignal::Psi, ErrorSignal::Omega, ErrorSignal::Bias})
    EXPECT_LT(r.rmse(ObserverVariant::Fused, "stationary", s), 1e-3) << signal_name(s);
}

TEST(MonteCarlo, RejectsEmptyConfig) {
  EXPECT_THROW(monte_carlo_rmse(0, 1, MonteCarloConfig{}), InvalidConfig);
  MonteCarloConfig c;
  c.variants.clear();
  EXPECT_THROW(monte_carlo_rmse(1, 1, c), InvalidConfig);
  EXPECT_THROW(RmseReport{}.rmse(ObserverVariant::Fused, "x", ErrorSignal::Psi), std::out_of_range);
}
