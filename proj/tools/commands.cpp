#include "commands.hpp"

#include "csv.hpp"
#include "rotobs/analysis/certificate.hpp"
#include "rotobs/analysis/linearization.hpp"
#include "rotobs/analysis/montecarlo.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

namespace rotobs::app {

namespace {

std::string path_in(const RunConfig& cfg, const std::string& file) {
  return (std::filesystem::path(cfg.out_dir) / file).string();
}

std::vector<std::string> trajectory_header() {
  std::vector<std::string> h{"t"};
  const char* q[] = {"w", "x", "y", "z"};
  const char* v[] = {"x", "y", "z"};
  auto add = [&](const std::string& prefix, const char* const* names, int n) {
    for (int i = 0; i < n; ++i) h.push_back(prefix + "_" + names[i]);
  };
  add("q", q, 4);
  add("omega", v, 3);
  add("b", v, 3);
  add("qhat", q, 4);
  add("omegahat", v, 3);
  add("bhat", v, 3);
  add("lhat", v, 3);
  h.push_back("psi");
  for (int i = 0; i < 4; ++i) h.push_back("psi_eq" + std::to_string(i));
  h.insert(h.end(), {"v1", "r_tilde_norm", "delta_L_norm"});
  return h;
}

void write_vec(CsvWriter& w, const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) w.cell(v(i));
}

std::vector<ObserverVariant> observers_or(const RunConfig& cfg,
                                          std::vector<ObserverVariant> fallback) {
  return cfg.observers.empty() ? fallback : cfg.observers;
}

}  // namespace

RunConfig resolve_config(const CommandOptions& opt) {
  RunConfig cfg = opt.config_path ? load_config(*opt.config_path) : parse_config_text("");
  if (opt.out_dir) cfg.out_dir = *opt.out_dir;
  if (opt.runs) {
    if (*opt.runs < 1) throw ConfigError("--runs must be at least 1");
    cfg.runs = *opt.runs;
  }
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.observer) cfg.observers = parse_observer_list(*opt.observer);
  return cfg;
}

int cmd_simulate(const RunConfig& cfg_in, bool no_noise, std::ostream& log) {
  RunConfig cfg = cfg_in;
  cfg.sim.noise.enabled = !no_noise && cfg.noise_enabled.value_or(false);
  try {
    cfg.sim.validate();
  } catch (const InvalidConfig& e) {
    throw ConfigError(e.what());
  }
  const std::vector<ObserverVariant> variants = observers_or(
      cfg, {ObserverVariant::AngularMomentum, ObserverVariant::Complementary,
            ObserverVariant::FusedTrueAttitude, ObserverVariant::Fused});
  Rng rng = run_stream(cfg);
  const Scenario sc = build_scenario(cfg, rng);
  ensure_directory(cfg.out_dir);

  std::vector<std::unique_ptr<CsvWriter>> writers;
  for (const ObserverVariant v : variants) {
    writers.push_back(std::make_unique<CsvWriter>(
        path_in(cfg, fmt::format("trajectory_obs{}.csv", variant_number(v))), trajectory_header()));
  }
  std::vector<SampleRow> last(variants.size());
  simulate(sc, cfg.sim, variants, rng, [&](ObserverVariant v, const SampleRow& row) {
    const auto idx = static_cast<std::size_t>(std::find(variants.begin(), variants.end(), v) -
                                              variants.begin());
    CsvWriter& w = *writers[idx];
    w.cell(row.t);
    write_vec(w, row.truth.q.coeffs());
    write_vec(w, row.truth.omega);
    write_vec(w, row.bias);
    write_vec(w, row.state.q_hat.coeffs());
    write_vec(w, row.omega_hat);
    write_vec(w, row.b_hat);
    write_vec(w, row.state.l_hat);
    w.cell(row.psi);
    for (const double p : row.psi_equilibria) w.cell(p);
    w.cell(row.v1).cell(row.r_tilde_norm).cell(row.delta_L_norm);
    w.end_row();
    last[idx] = row;
  });
  for (std::size_t i = 0; i < variants.size(); ++i) {
    writers[i]->close();
    const SampleRow& r = last[i];
    log << fmt::format("observer {}: t = {:.3f} s  psi = {:.3e}  |w~| = {:.3e}  |b~| = {:.3e}\n",
                       variant_number(variants[i]), r.t, r.psi, r.error.omega_tilde.norm(),
                       r.error.b_tilde.norm());
  }
  log << "wrote " << variants.size() << " trajectory file(s) to " << cfg.out_dir << "\n";
  return kExitOk;
}

int cmd_montecarlo(const RunConfig& cfg_in, bool no_noise, std::ostream& log) {
  RunConfig cfg = cfg_in;
  MonteCarloConfig mc;
  mc.sim = cfg.sim;
  mc.sim.noise.enabled = !no_noise && cfg.noise_enabled.value_or(true);
  mc.variants = observers_or(cfg, {ObserverVariant::AngularMomentum,
                                   ObserverVariant::Complementary, ObserverVariant::Fused});
  mc.weights = cfg.weights;
  mc.threads = cfg.threads;
  try {
    mc.sim.validate();
  } catch (const InvalidConfig& e) {
    throw ConfigError(e.what());
  }
  if (cfg.source == ScenarioSource::Explicit) {
    throw ConfigError("montecarlo samples its scenarios; scenario.source cannot be explicit");
  }

  const RmseReport rep = monte_carlo_rmse(cfg.runs, cfg.seed, mc);
  ensure_directory(cfg.out_dir);
  const std::size_t n_ok = rep.n_runs - rep.failures.size();

  CsvWriter table(path_in(cfg, "rmse.csv"),
                  {"observer", "window", "signal", "rmse", "n_runs", "seed"});
  for (const RmseCell& c : rep.cells) {
    table.cell(static_cast<long long>(variant_number(c.variant)))
        .cell(c.window)
        .cell(signal_name(c.signal))
        .cell(c.rmse)
        .cell(static_cast<long long>(n_ok))
        .cell(std::to_string(rep.seed));
    table.end_row();
  }
  table.close();

  CsvWriter detail(path_in(cfg, "runs.csv"),
                   {"run", "observer", "window", "signal", "integral", "l2_norm"});
  for (const RunIntegrals& r : rep.runs) {
    for (std::size_t w = 0; w < rep.windows.size(); ++w) {
      for (int s = 0; s < kSignalCount; ++s) {
        detail.cell(static_cast<long long>(r.run))
            .cell(static_cast<long long>(variant_number(r.variant)))
            .cell(rep.windows[w].name)
            .cell(signal_name(static_cast<ErrorSignal>(s)))
            .cell(r.integrals[w][s])
            .cell(std::sqrt(r.integrals[w][s]));
        detail.end_row();
      }
    }
  }
  detail.close();

  CsvWriter failures(path_in(cfg, "failures.csv"), {"run", "error"});
  for (const RunFailure& f : rep.failures) {
    std::string what = f.what;
    std::replace(what.begin(), what.end(), ',', ';');
    std::replace(what.begin(), what.end(), '\n', ' ');
    failures.cell(static_cast<long long>(f.run)).cell(what);
    failures.end_row();
  }
  failures.close();

  log << fmt::format("{} runs (seed {}), {} failed\n", rep.n_runs, rep.seed, rep.failures.size());
  log << fmt::format("{:>8} {:>11} {:>6} {:>12}\n", "observer", "window", "signal", "rmse");
  for (const RmseCell& c : rep.cells) {
    log << fmt::format("{:>8} {:>11} {:>6} {:>12.4e}\n", variant_number(c.variant), c.window,
                       signal_name(c.signal), c.rmse);
  }
  if (!rep.failures.empty()) {
    log << "failed runs:";
    for (const RunFailure& f : rep.failures) log << " " << f.run;
    log << "\n";
  }
  if (rep.failure_fraction() > 0.01) {
    log << "error: more than 1% of the runs failed\n";
    return kExitNumeric;
  }
  return kExitOk;
}

int cmd_linearize(const RunConfig& cfg, std::ostream& log) {
  Rng rng = run_stream(cfg);
  const Scenario sc = build_scenario(cfg, rng);
  OperatingPoint op{cfg.linearize.identity_attitude ? RotationMatrix::identity()
                                                    : quat_to_rot(sc.truth0.q),
                    sc.bias};
  const LinearizeSettings& ls = cfg.linearize;
  ensure_directory(cfg.out_dir);

  const std::vector<SpectrumPoint> spectrum =
      spectrum_vs_alpha(op, cfg.sim.gains, sc.dirs, sc.inertia, ls.alpha_grid, ls.variant);
  CsvWriter eig(path_in(cfg, "eigenvalues.csv"), {"alpha", "re", "im"});
  for (const SpectrumPoint& p : spectrum) {
    double max_re = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < p.eigenvalues.size(); ++i) {
      eig.cell(p.alpha).cell(p.eigenvalues(i).real()).cell(p.eigenvalues(i).imag());
      eig.end_row();
      max_re = std::max(max_re, p.eigenvalues(i).real());
    }
    if (!(max_re < 0.0)) {
      log << fmt::format("warning: A is not Hurwitz at alpha = {} (max real part {:.6g})\n",
                         p.alpha, max_re);
    }
  }
  eig.close();

  const LinearizedModel model =
      linearize_error_dynamics(op, cfg.sim.gains, sc.dirs, sc.inertia, ls.variant);
  if (!is_hurwitz(model.A)) {
    log << fmt::format("warning: A is not Hurwitz at the configured alpha = {}\n",
                       cfg.sim.gains.alpha);
  }
  const std::vector<Eigen::VectorXd> sigma =
      frequency_response_sigma(model, ls.channel, ls.omega_grid);
  const Eigen::Index n_sigma = sigma.empty() ? 0 : sigma.front().size();
  std::vector<std::string> header{"omega_rad_s"};
  for (Eigen::Index k = 0; k < n_sigma; ++k) {
    header.push_back(k == 0 ? "sigma_min"
                     : k + 1 == n_sigma ? "sigma_max"
                                        : "sigma_" + std::to_string(k + 1));
  }
  CsvWriter sig(path_in(cfg, "sigma.csv"), header);
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    sig.cell(ls.omega_grid[i]);
    // Singular values come in descending order; columns are ascending.
    for (Eigen::Index k = n_sigma - 1; k >= 0; --k) sig.cell(sigma[i](k));
    sig.end_row();
  }
  sig.close();

  const auto eigs = Eigen::EigenSolver<Mat9>(model.A).eigenvalues();
  log << fmt::format("alpha = {}: real parts in [{:.4f}, {:.4f}]\n", cfg.sim.gains.alpha,
                     eigs.real().minCoeff(), eigs.real().maxCoeff());
  log << "wrote eigenvalues.csv (" << spectrum.size() << " alphas) and sigma.csv ("
      << sigma.size() << " frequencies) to " << cfg.out_dir << "\n";
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg_in, std::ostream& log) {
  RunConfig cfg = cfg_in;
  // The certificate concerns the noise-free angular-momentum observer.
  cfg.sim.noise.enabled = false;
  cfg.sim.sampling = SamplingMode::Continuous;
  try {
    cfg.sim.validate();
  } catch (const InvalidConfig& e) {
    throw ConfigError(e.what());
  }
  Rng rng = run_stream(cfg);
  const Scenario sc = build_scenario(cfg, rng);
  const std::vector<RunRecord> rec =
      simulate_records(sc, cfg.sim, {ObserverVariant::AngularMomentum}, rng);
  const std::vector<SampleRow>& rows = rec.front().rows;
  const ObserverGains& g = cfg.sim.gains;
  const VerifySettings& vs = cfg.verify;

  Rng crng = make_stream(cfg.seed, 0);
  const ProofCertificate pc = proof_constants(rows, g, sc.dirs, sc.inertia, cfg.sim.torque,
                                              rows.front().v1, crng, vs.gamma_samples);
  const QuadraticBounds qb = estimate_c1_c2(g, sc.dirs, crng, 20000, vs.eps_bar);
  const double eps1 = estimate_eps1(g, sc.dirs, crng, vs.eps1_samples, vs.eps_bar);
  UlesOptions uo;
  uo.c1 = vs.c1.value_or(qb.c1);
  uo.c2 = vs.c2.value_or(qb.c2);
  uo.omega_bound = pc.K3;
  uo.samples = vs.ules_samples;
  uo.eps_fraction = vs.eps_fraction;
  Rng probe = crng;
  const UlesReport probe_rep = evaluate_ules(g, sc.dirs, sc.inertia, uo, probe, 0.0);
  const double eps = uo.eps_fraction * std::min(probe_rep.eps2, probe_rep.eps3);
  const UlesReport ules = evaluate_ules(g, sc.dirs, sc.inertia, uo, crng, eps);

  ensure_directory(cfg.out_dir);
  CsvWriter csv(path_in(cfg, "certificate.csv"),
                {"item", "kind", "value", "n_samples", "n_violations", "status"});
  auto constant = [&](const std::string& name, double v, const std::string& status = "") {
    csv.cell(name).cell(std::string("constant")).cell(v).cell(0LL).cell(0LL).cell(status);
    csv.end_row();
  };
  constant("K1_root_sum_sq", pc.K1_root_sum_sq, "reported");
  constant("K1_triangle", pc.K1_triangle, "used");
  for (const auto& [name, v] :
       std::vector<std::pair<std::string, double>>{{"K2", pc.K2}, {"K3", pc.K3}, {"K4", pc.K4},
                                                   {"K5", pc.K5}, {"K6", pc.K6}, {"K7", pc.K7},
                                                   {"K8", pc.K8}, {"K9", pc.K9}, {"K", pc.K}}) {
    constant(name, v);
  }
  constant("K_bar", pc.K_bar, "used");
  constant("K_bar_k9_only", pc.K_bar_k9_only, "reported");
  constant("gamma", pc.gamma, pc.gamma > 0.0 ? "positive" : "NOT POSITIVE");
  constant("gamma_lower_bound", pc.gamma_lower_bound);
  constant("c1_estimate", qb.c1, "estimate");
  constant("c2_estimate", qb.c2, "estimate");
  constant("c1_used", uo.c1);
  constant("c2_used", uo.c2);
  constant("eps1_estimate", eps1, "estimate");
  constant("eps2", ules.eps2);
  constant("eps3", ules.eps3, "estimate");
  constant("eps", ules.eps);
  constant("W11_norm", ules.w11_norm, "estimate");
  constant("W12_norm", ules.w12_norm, "estimate");
  for (const InequalityCheck& c : pc.holds) {
    csv.cell(c.name)
        .cell(std::string("inequality"))
        .cell(c.worst_margin)
        .cell(static_cast<long long>(c.n_samples))
        .cell(static_cast<long long>(c.n_violations))
        .cell(std::string(c.holds() ? "pass" : c.certified ? "FAIL" : "fail (not certified)"));
    csv.end_row();
  }
  for (const MatrixCheck& m : ules.matrices) {
    csv.cell(m.name + "_min_eigenvalue")
        .cell(std::string("matrix"))
        .cell(m.min_eigenvalue)
        .cell(static_cast<long long>(uo.samples + 1))
        .cell(static_cast<long long>(m.positive_definite() ? 0 : 1))
        .cell(std::string(m.positive_definite() ? "pass" : "FAIL"));
    csv.end_row();
  }
  csv.close();

  std::ofstream txt(path_in(cfg, "certificate.txt"));
  txt << "Stability-proof certificate (angular-momentum observer, noise-free run of "
      << rows.back().t << " s, " << rows.size() << " samples)\n\n";
  txt << "Constants\n";
  txt << fmt::format("  K1 (sum k_i^2)^(1/2) = {:.6g}   [root-sum-square form; reported only]\n",
                     pc.K1_root_sum_sq);
  txt << fmt::format("  K1 sum k_i |v_i|^2    = {:.6g}   [triangle bound; used below]\n",
                     pc.K1_triangle);
  txt << fmt::format("  K2 = {:.6g}  K3 = {:.6g}  K4 = {:.6g}  K5 = {:.6g}\n", pc.K2, pc.K3, pc.K4,
                     pc.K5);
  txt << fmt::format("  K6 = {:.6g}  K7 = {:.6g}  K8 = {:.6g}  K9 = {:.6g}\n", pc.K6, pc.K7, pc.K8,
                     pc.K9);
  txt << fmt::format("  K = {:.6g}  K_bar = K9 + K = {:.6g}  (K9 alone: {:.6g})\n", pc.K,
                     pc.K_bar, pc.K_bar_k9_only);
  txt << fmt::format("  gamma = {:.6g}  (analytic lower bound {:.6g}){}\n", pc.gamma,
                     pc.gamma_lower_bound, pc.gamma > 0.0 ? "" : "  NOT POSITIVE");
  txt << fmt::format("  D = diag({:.6g}, {:.6g}, {:.6g})\n\n", pc.d(0), pc.d(1), pc.d(2));
  txt << "Pointwise inequalities (margin = bound - value; worst over samples)\n";
  for (const InequalityCheck& c : pc.holds) {
    txt << fmt::format("  [{}] {:<26} {:<48} worst margin {:.4g} at t = {:.3f}, {}/{} violations{}\n",
                       c.holds() ? "pass" : "FAIL", c.name, c.statement, c.worst_margin,
                       c.worst_at, c.n_violations, c.n_samples,
                       c.certified ? "" : "  (not certified)");
  }
  txt << "\nLocal exponential stability (estimate-based items marked *)\n";
  txt << fmt::format("  c1 = {:.6g}, c2 = {:.6g} (estimates*: {:.6g}, {:.6g} from {} samples)\n",
                     uo.c1, uo.c2, qb.c1, qb.c2, qb.n_samples);
  txt << fmt::format("  eps1* = {:.6g} (eps_bar = {})\n", eps1, vs.eps_bar);
  txt << fmt::format("  eps2 = {:.6g}, eps3* = {:.6g} (|W11|* = {:.6g}, |W12|* = {:.6g})\n",
                     ules.eps2, ules.eps3, ules.w11_norm, ules.w12_norm);
  txt << fmt::format("  eps = {} * min(eps2, eps3) = {:.6g}\n", uo.eps_fraction, ules.eps);
  for (const MatrixCheck& m : ules.matrices) {
    txt << fmt::format("  [{}] {} min eigenvalue {:.6g}\n", m.positive_definite() ? "pass" : "FAIL",
                       m.name, m.min_eigenvalue);
  }
  const bool ok = pc.certified_inequalities_hold() && ules.certified() && pc.gamma > 0.0;
  txt << "\nResult: " << (ok ? "CERTIFIED" : "FAILED") << "\n";
  txt.close();

  log << fmt::format("gamma = {:.6g}, K1 = {:.6g} (root-sum-square) / {:.6g} (triangle), eps2 = {:.4g}, "
                     "eps3 = {:.4g}\n",
                     pc.gamma, pc.K1_root_sum_sq, pc.K1_triangle, ules.eps2, ules.eps3);
  for (const InequalityCheck& c : pc.holds) {
    if (!c.holds()) {
      log << fmt::format("{} {}: {} violations, worst margin {:.4g}\n",
                         c.certified ? "FAIL" : "note", c.name, c.n_violations, c.worst_margin);
    }
  }
  for (const MatrixCheck& m : ules.matrices) {
    if (!m.positive_definite()) {
      log << fmt::format("FAIL {} not positive definite (min eigenvalue {:.4g})\n", m.name,
                         m.min_eigenvalue);
    }
  }
  log << "certificate " << (ok ? "holds" : "FAILED") << "; report in " << cfg.out_dir << "\n";
  return ok ? kExitOk : kExitCertificate;
}

int run_command(const std::string& name, const CommandOptions& opt, std::ostream& out,
                std::ostream& err) {
  try {
    const RunConfig cfg = resolve_config(opt);
    if (name == "simulate") return cmd_simulate(cfg, opt.no_noise, out);
    if (name == "montecarlo") return cmd_montecarlo(cfg, opt.no_noise, out);
    if (name == "linearize") return cmd_linearize(cfg, out);
    if (name == "verify") return cmd_verify(cfg, out);
    err << "error: unknown command '" << name << "'\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidConfig& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NonFiniteState& e) {
    err << "numeric error: " << e.what() << " at t = " << format_double(e.time()) << "\n";
    return kExitNumeric;
  } catch (const DegenerateMeasurement& e) {
    err << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const SingularFrequency& e) {
    err << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const CertificateFailed& e) {
    err << "certificate failure: " << e.what() << "\n";
    return kExitCertificate;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace rotobs::app
