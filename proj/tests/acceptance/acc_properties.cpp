// Property suites: skew identities, relative-attitude derivative identity,
// equilibrium stall and residual rate, Lyapunov monotonicity, α-endpoint
// reductions, agreement with the reference listing, and positive
// definiteness of the uniform-stability matrices on the fixed example.
#include "acceptance.hpp"
#include "reference_observer.hpp"
#include "rotobs/analysis/certificate.hpp"
#include "rotobs/analysis/errors.hpp"
#include "rotobs/analysis/simulation.hpp"
#include "rotobs/rng.hpp"

#include <cmath>
#include <string>

using namespace rotobs;
using rotobs::testing::fmt_g;

namespace {

void skew_identities(rotobs::testing::Verdict& v) {
  Rng rng = make_stream(101, 0);
  double worst[5] = {0, 0, 0, 0, 0};
  for (int n = 0; n < 1000; ++n) {
    const Vec3 a = gaussian3(rng), b = gaussian3(rng);
    const Mat3 r = sample_uniform_rotation(rng).matrix();
    const double e[5] = {
        (skew(a).transpose() + skew(a)).cwiseAbs().maxCoeff(),
        (skew(a) * b + skew(b) * a).cwiseAbs().maxCoeff(),
        std::abs(a.dot(skew(b) * a)),
        (r * skew(a) - skew(r * a) * r).cwiseAbs().maxCoeff(),
        (skew(a) * skew(b) - (b * a.transpose() - b.dot(a) * Mat3::Identity()))
            .cwiseAbs()
            .maxCoeff(),
    };
    for (int i = 0; i < 5; ++i) worst[i] = std::max(worst[i], e[i]);
  }
  const char* names[5] = {"S^T=-S", "S(a)b=-S(b)a", "a^T S(b) a=0", "R S(a)=S(Ra) R",
                          "S(a)S(b)=ba^T-(b^T a)I"};
  double w = 0;
  for (int i = 0; i < 5; ++i) {
    v.require(worst[i] < 1e-12, std::string(names[i]) + " max error " + fmt_g(worst[i]));
    w = std::max(w, worst[i]);
  }
  v.note("skew max err " + fmt_g(w));
}

void relative_attitude_derivative(rotobs::testing::Verdict& v) {
  // V = ½‖R₁R₂ᵀv − v‖², V̇ = (ω₁ − ω₂)ᵀ S(R₁ᵀv) R₂ᵀv.
  Rng rng = make_stream(102, 0);
  const double h = 1e-6;
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const Mat3 r1 = sample_uniform_rotation(rng).matrix();
    const Mat3 r2 = sample_uniform_rotation(rng).matrix();
    const Vec3 w1 = gaussian3(rng), w2 = gaussian3(rng), vv = gaussian3(rng);
    auto lyap = [&](double t) {
      const Mat3 a = r1 * exp_so3(t * w1).matrix();
      const Mat3 b = r2 * exp_so3(t * w2).matrix();
      return 0.5 * (a * b.transpose() * vv - vv).squaredNorm();
    };
    const double fd = (lyap(h) - lyap(-h)) / (2 * h);
    const double exact = (w1 - w2).dot(skew(r1.transpose() * vv) * (r2.transpose() * vv));
    // Relative error with an absolute floor for near-zero rates.
    const double scale = std::max(std::abs(exact), 1e-3 * vv.squaredNorm() * (w1 - w2).norm());
    worst = std::max(worst, std::abs(fd - exact) / scale);
  }
  v.require(worst < 1e-4, "relative-attitude derivative rel error " + fmt_g(worst) + " < 1e-4");
  v.note("dV rel err " + fmt_g(worst));
}

void equilibria(rotobs::testing::Verdict& v) {
  Rng rng = make_stream(103, 0);
  const double h = 1e-6;
  double stall = 0.0, rate = 0.0;
  for (int n = 0; n < 100; ++n) {
    const Scenario sc = sample_scenario(rng, default_weights());
    for (int i = 0; i < 4; ++i) {
      const RotationMatrix eq = equilibrium_rotation(sc.dirs, i);
      stall = std::max(stall, attitude_residual(eq, sc.dirs).norm());
      const Vec3 w = gaussian3(rng);
      const Vec3 rp =
          attitude_residual(RotationMatrix(eq.matrix() * exp_so3(h * w).matrix()), sc.dirs);
      const Vec3 rm =
          attitude_residual(RotationMatrix(eq.matrix() * exp_so3(-h * w).matrix()), sc.dirs);
      const Vec3 exact = residual_rate_at_equilibrium(sc.dirs, i, w);
      rate = std::max(rate, ((rp - rm) / (2 * h) - exact).norm() / std::max(1.0, exact.norm()));
    }
  }
  v.require(stall < 1e-12, "residual at equilibria " + fmt_g(stall) + " < 1e-12");
  v.require(rate < 1e-6, "equilibrium residual-rate formula error " + fmt_g(rate) + " < 1e-6");
  v.note("stall " + fmt_g(stall) + " rate err " + fmt_g(rate));
}

void lyapunov_monotone(rotobs::testing::Verdict& v) {
  Rng rng = make_stream(104, 0);
  SimulationConfig cfg;  // noise-free, continuous
  double worst = -1e300;
  int failures = 0;
  for (int n = 0; n < 50; ++n) {
    const Scenario sc = sample_scenario(rng, default_weights());
    Rng sim_rng = make_stream(104, 1000 + n);
    try {
      const auto rec = simulate_records(sc, cfg, {ObserverVariant::Fused}, sim_rng);
      const auto& rows = rec.front().rows;
      for (std::size_t k = 1; k < rows.size(); ++k)
        worst = std::max(worst, rows[k].v1 - rows[k - 1].v1);
    } catch (const std::exception&) {
      ++failures;
    }
  }
  v.require(failures == 0, std::to_string(failures) + " monotonicity runs failed");
  v.require(worst < 1e-9, "max per-step V1 increase " + fmt_g(worst) + " < 1e-9");
  v.note("max dV1 " + fmt_g(worst));
}

void alpha_endpoints(rotobs::testing::Verdict& v) {
  const Scenario sc = paper_scenario(default_weights());
  bool ok0 = true, ok1 = true;
  for (bool noise : {false, true}) {
    SimulationConfig cfg;
    cfg.integrator.duration = 2.0;
    cfg.noise.enabled = noise;
    cfg.gains.alpha = 0.0;
    Rng a = make_stream(105, 0);
    const auto r0 = simulate_records(
        sc, cfg, {ObserverVariant::Complementary, ObserverVariant::Fused}, a);
    for (std::size_t k = 0; k < r0[0].rows.size(); ++k) {
      const ObserverState& s2 = r0[0].rows[k].state;
      const ObserverState& s4 = r0[1].rows[k].state;
      ok0 = ok0 && s2.q_hat.coeffs() == s4.q_hat.coeffs() && s2.b_hat == s4.b_hat;
    }
    cfg.gains.alpha = 1.0;
    Rng b = make_stream(105, 0);
    const auto r1 = simulate_records(
        sc, cfg, {ObserverVariant::AngularMomentum, ObserverVariant::Fused}, b);
    for (std::size_t k = 0; k < r1[0].rows.size(); ++k) {
      const ObserverState& s1 = r1[0].rows[k].state;
      const ObserverState& s4 = r1[1].rows[k].state;
      ok1 = ok1 && s1.q_hat.coeffs() == s4.q_hat.coeffs() && s1.l_hat == s4.l_hat;
    }
  }
  v.require(ok0, "alpha=0 fused q_hat,b_hat == complementary (exact)");
  v.require(ok1, "alpha=1 fused q_hat,l_hat == angular-momentum (exact)");
}

void reference_listing(rotobs::testing::Verdict& v) {
  Rng rng = make_stream(106, 0);
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    std::uniform_real_distribution<double> u(0.1, 5.0), a(0.0, 1.0);
    ObserverGains g;
    g.k_R = u(rng);
    g.k_l = u(rng);
    g.k_a = u(rng);
    g.k_b = u(rng);
    g.alpha = a(rng);
    const Scenario sc = sample_scenario(rng, default_weights());
    ObserverVector x;
    x << gaussian3(rng), gaussian3(rng), standard_normal(rng), standard_normal(rng),
        standard_normal(rng), standard_normal(rng);
    ObserverInput in;
    in.meas.y0 = gaussian3(rng);
    for (int i = 0; i < 3; ++i) in.meas.y.push_back(gaussian3(rng));
    in.tau = gaussian3(rng);
    const ObserverVector got = observer_field(ObserverVariant::Fused, x, in, sc.inertia, g, sc.dirs);
    const ObserverVector ref = rotobs::testing::reference_fused(
        x, in.meas, in.tau, sc.inertia.matrix(), g, sc.dirs.directions(), sc.dirs.weights());
    worst = std::max(worst, (got - ref).cwiseAbs().maxCoeff() /
                                std::max(1.0, ref.cwiseAbs().maxCoeff()));
  }
  v.require(worst < 1e-12, "fused field vs reference listing " + fmt_g(worst) + " < 1e-12");
  v.note("listing err " + fmt_g(worst));
}

void ules_matrices(rotobs::testing::Verdict& v) {
  const Scenario sc = paper_scenario(default_weights());
  SimulationConfig cfg;
  Rng rng = make_stream(7, 0);
  const auto rows = simulate_records(sc, cfg, {ObserverVariant::AngularMomentum}, rng)[0].rows;
  Rng crng = make_stream(7, 0);
  const ProofCertificate pc = proof_constants(rows, cfg.gains, sc.dirs, sc.inertia, cfg.torque,
                                              rows.front().v1, crng, 2000);
  const QuadraticBounds qb = estimate_c1_c2(cfg.gains, sc.dirs, crng);
  for (bool estimated : {true, false}) {
    UlesOptions opt;
    if (estimated) {
      opt.c1 = qb.c1;
      opt.c2 = qb.c2;
    }
    opt.omega_bound = pc.K3;
    const std::string tag = estimated ? "estimated c" : "c=0.1";
    try {
      const UlesReport r = ules_certificate(cfg.gains, sc.dirs, sc.inertia, opt, crng);
      for (const MatrixCheck& m : r.matrices)
        v.require(m.positive_definite(),
                  tag + " " + m.name + " min eig " + fmt_g(m.min_eigenvalue) + " > 0");
      v.note(tag + ": eps=" + fmt_g(r.eps) + " min eig M1=" + fmt_g(r.matrices[0].min_eigenvalue) +
             " M2=" + fmt_g(r.matrices[1].min_eigenvalue) +
             " W=" + fmt_g(r.matrices[2].min_eigenvalue));
    } catch (const CertificateFailed& e) {
      v.require(false, tag + ": " + e.what());
    }
  }
}

}  // namespace

int main() {
  rotobs::testing::Verdict v("properties");
  skew_identities(v);
  relative_attitude_derivative(v);
  equilibria(v);
  lyapunov_monotone(v);
  alpha_endpoints(v);
  reference_listing(v);
  ules_matrices(v);
  return v.finish();
}
