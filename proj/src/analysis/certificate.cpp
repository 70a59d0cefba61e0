#include "rotobs/analysis/certificate.hpp"

#include "rotobs/analysis/errors.hpp"

#include <gsl/gsl_multimin.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace rotobs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double min_eig(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double spectral_norm(const Eigen::MatrixXd& m) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
}

/// Accumulates one pointwise inequality value ≤ bound.
class CheckBuilder {
 public:
  CheckBuilder(std::string name, std::string statement, bool certified) {
    c_.name = std::move(name);
    c_.statement = std::move(statement);
    c_.certified = certified;
    c_.worst_margin = kInf;
  }
  void add(double value, double bound, double at, double slack = 0.0) {
    const double margin = bound - value;
    ++c_.n_samples;
    if (margin < -slack || !std::isfinite(margin)) ++c_.n_violations;
    if (margin < c_.worst_margin || !std::isfinite(margin)) {
      c_.worst_margin = margin;
      c_.worst_at = at;
    }
  }
  InequalityCheck done() { return c_; }

 private:
  InequalityCheck c_;
};

/// k_l Σ(kᵢ/2)‖R̃vᵢ − vᵢ‖².
double attitude_term(const RotationMatrix& r_tilde, const ObserverGains& g,
                     const DirectionSet& dirs) {
  ErrorState e;
  e.R_tilde = r_tilde;
  return lyapunov_v1(LyapunovForm::AngularMomentum, e, g, dirs);
}

}  // namespace

bool ProofCertificate::certified_inequalities_hold() const {
  return std::all_of(holds.begin(), holds.end(),
                     [](const InequalityCheck& c) { return !c.certified || c.holds(); });
}

const InequalityCheck& ProofCertificate::check(const std::string& name) const {
  for (const InequalityCheck& c : holds) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no certificate check named " + name);
}

Vec3 identity_equilibrium_d(const DirectionSet& dirs) {
  const Vec3& l = dirs.eigenvalues();
  return {l(1) + l(2), l(0) + l(2), l(0) + l(1)};
}

namespace {

struct GammaProblem {
  const InertiaMatrix* j;
  Mat3 d2;
};

double gamma_objective(const Vec4& wxyz, const GammaProblem& p) {
  const Mat3 r = quat_to_matrix(wxyz / wxyz.norm());
  const Mat3 a = r * p.j->inverse() * r.transpose();
  Eigen::SelfAdjointEigenSolver<Mat3> es(a * p.d2 * a, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double gsl_gamma_objective(const gsl_vector* x, void* params) {
  const Vec4 q(gsl_vector_get(x, 0), gsl_vector_get(x, 1), gsl_vector_get(x, 2),
               gsl_vector_get(x, 3));
  if (q.norm() < 1e-12) return kInf;
  return gamma_objective(q, *static_cast<const GammaProblem*>(params));
}

}  // namespace

double gamma_infimum(const InertiaMatrix& j, const Vec3& d, Rng& rng, std::size_t samples) {
  GammaProblem p{&j, d.cwiseAbs2().asDiagonal()};
  double best = kInf;
  Vec4 best_q = Vec4(1.0, 0.0, 0.0, 0.0);
  for (std::size_t s = 0; s < std::max<std::size_t>(samples, 1); ++s) {
    const Vec4 q = sample_uniform_quaternion(rng).coeffs();
    const double f = gamma_objective(q, p);
    if (f < best) {
      best = f;
      best_q = q;
    }
  }

  gsl_multimin_function fn{&gsl_gamma_objective, 4, &p};
  gsl_vector* x = gsl_vector_alloc(4);
  gsl_vector* step = gsl_vector_alloc(4);
  for (int i = 0; i < 4; ++i) gsl_vector_set(x, i, best_q(i));
  gsl_vector_set_all(step, 0.05);
  gsl_multimin_fminimizer* m =
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 4);
  gsl_multimin_fminimizer_set(m, &fn, x, step);
  for (int iter = 0; iter < 2000; ++iter) {
    if (gsl_multimin_fminimizer_iterate(m) != 0) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m), 1e-12) == GSL_SUCCESS) break;
  }
  best = std::min(best, gsl_multimin_fminimizer_minimum(m));
  gsl_multimin_fminimizer_free(m);
  gsl_vector_free(step);
  gsl_vector_free(x);
  return best;
}

ProofCertificate proof_constants(const std::vector<SampleRow>& rows, const ObserverGains& g,
                                 const DirectionSet& dirs, const InertiaMatrix& j,
                                 const TorqueProfile& torque, double v1_0, Rng& rng,
                                 std::size_t gamma_samples) {
  if (rows.size() < 3) throw std::invalid_argument("certificate needs at least three samples");
  const std::size_t n = rows.size();
  const double h = rows[1].t - rows[0].t;

  // Pointwise quantities.
  std::vector<Vec3> r_tilde(n), r_k(n), l_tilde(n);
  std::vector<double> att(n);
  double k3 = 0.0;
  double k4 = 0.0;
  std::vector<double> l_hat_dot_norm(n);
  for (std::size_t i = 0; i < n; ++i) {
    const SampleRow& row = rows[i];
    const RotationMatrix r = quat_to_rot(row.truth.q);
    const Vec3 tau = torque_at(torque, row.t);
    const Vec3 omega_dot = dynamics_derivative(row.truth, j, tau).omega_dot;
    k3 = std::max(k3, row.truth.omega.norm());
    k4 = std::max(k4, omega_dot.norm());
    const MeasurementSet meas = measure_exact(row.truth, row.bias, dirs, row.t);
    r_tilde[i] = innovation_rk(row.state.q_hat, meas, dirs);
    r_k[i] = r * r_tilde[i];
    l_tilde[i] = row.state.l_hat - r * (j.matrix() * row.truth.omega);
    const RotationMatrix r_hat = quat_to_rot(row.state.q_hat);
    att[i] = attitude_term(r_hat * r.transpose(), g, dirs);
    const ObserverInput in{meas, tau, r.matrix()};
    l_hat_dot_norm[i] = observer1_derivative(row.state, in, j, g, dirs).l_hat_dot.norm();
  }

  ProofCertificate c;
  const double lj_min = j.min_eigenvalue();
  const double lj_max = j.max_eigenvalue();
  const double ljinv_max = 1.0 / lj_min;
  double sum_k2 = 0.0;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    sum_k2 += dirs.weight(i) * dirs.weight(i);
    c.K1_triangle += dirs.weight(i) * dirs.direction(i).squaredNorm();
  }
  c.K1_root_sum_sq = std::sqrt(sum_k2);
  c.K1 = c.K1_triangle;
  c.K2 = std::sqrt(2.0 * v1_0);
  c.K3 = k3;
  c.K4 = k4;
  c.K5 = lj_max * c.K4 + lj_max * c.K3 * c.K3 + g.k_l * c.K1 / lj_min;
  c.d = identity_equilibrium_d(dirs);
  c.K6 = c.d.cwiseAbs().maxCoeff();
  c.K7 = c.K6 * (c.K2 / lj_min + g.k_R * c.K1);
  c.K8 = c.K3 * c.K1 + c.K7;
  c.K = c.K1 * (c.K3 * c.K3 + c.K4) + c.K3 * c.K7 +
        2.0 * c.K3 * c.K6 * (ljinv_max * c.K2 + g.k_R * c.K1) +
        c.K6 * (ljinv_max * c.K2 * c.K3 + g.k_R * c.K7);
  c.K9 = c.K3 * c.K3 * c.K1 + 2.0 * c.K8 + 2.0 * g.k_R * c.K2 * ljinv_max * c.K6 +
         g.k_R * g.k_R * c.K1;
  c.K_bar_k9_only = c.K9;
  c.K_bar = c.K9 + c.K;
  c.gamma = gamma_infimum(j, c.d, rng, gamma_samples);
  c.gamma_lower_bound = std::pow(1.0 / lj_max, 2) * c.d.cwiseAbs2().minCoeff();

  CheckBuilder k1_tri("r_tilde_le_K1_triangle", "|r~_k| <= sum k_i |v_i|^2", true);
  CheckBuilder k1_rss("r_tilde_le_K1_root_sum_sq", "|r~_k| <= (sum k_i^2)^(1/2)", false);
  CheckBuilder k2("l_tilde_le_K2", "|l~| <= (2 V1(0) - attitude term)^(1/2)", true);
  CheckBuilder k5("l_hat_dot_le_K5", "|d/dt l^| <= K5", true);
  CheckBuilder v1dec("v1_nonincreasing", "V1(t+h) - V1(t) <= 1e-9", true);
  CheckBuilder k7("r_k_dot_le_K7", "|d/dt r_k| <= K7", true);
  CheckBuilder k8("r_tilde_dot_le_K8", "|d/dt r~_k| <= K8", true);
  CheckBuilder kk("r_tilde_ddot_le_K", "|d2/dt2 r~_k| <= K", true);
  CheckBuilder k9("second_bound", "-|d/dt r~_k|^2 <= -gamma |l~|^2 + K9 |r~_k|", true);

  for (std::size_t i = 0; i < n; ++i) {
    const double t = rows[i].t;
    k1_tri.add(r_tilde[i].norm(), c.K1_triangle, t);
    k1_rss.add(r_tilde[i].norm(), c.K1_root_sum_sq, t);
    // Rounding in V1 can push the radicand slightly negative at convergence.
    k2.add(l_tilde[i].norm(), std::sqrt(std::max(0.0, 2.0 * v1_0 - att[i])), t, 1e-9);
    k5.add(l_hat_dot_norm[i], c.K5, t);
    if (i > 0) v1dec.add(rows[i].v1 - rows[i - 1].v1, 1e-9, t);
    if (i == 0 || i + 1 == n) continue;
    const Vec3 rk_dot = (r_k[i + 1] - r_k[i - 1]) / (2.0 * h);
    const Vec3 rt_dot = (r_tilde[i + 1] - r_tilde[i - 1]) / (2.0 * h);
    const Vec3 rt_ddot = (r_tilde[i + 1] - 2.0 * r_tilde[i] + r_tilde[i - 1]) / (h * h);
    k7.add(rk_dot.norm(), c.K7, t);
    k8.add(rt_dot.norm(), c.K8, t);
    kk.add(rt_ddot.norm(), c.K, t);
    k9.add(-rt_dot.squaredNorm(), -c.gamma * l_tilde[i].squaredNorm() + c.K9 * r_tilde[i].norm(),
           t);
  }
  for (CheckBuilder* b : {&k1_tri, &k1_rss, &k2, &k5, &v1dec, &k7, &k8, &kk, &k9}) {
    c.holds.push_back(b->done());
  }
  return c;
}

bool UlesReport::certified() const {
  return std::all_of(matrices.begin(), matrices.end(),
                     [](const MatrixCheck& m) { return m.positive_definite(); });
}

double ules_eps2(const ObserverGains& g, const InertiaMatrix& j, const Vec3& d, double c1,
                 double c2) {
  const double lj2 = j.min_eigenvalue() * j.min_eigenvalue();
  double eps2 = kInf;
  for (const double ci : {c1, c2}) {
    for (int k = 0; k < 3; ++k) {
      const double dj = std::abs(d(k));
      eps2 = std::min(eps2, 2.0 * lj2 * g.k_R / dj *
                                (1.0 + std::sqrt(1.0 + ci / (lj2 * g.k_R * g.k_R))));
    }
  }
  return eps2;
}

namespace {

using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat36 = Eigen::Matrix<double, 3, 6>;

/// Symmetric P with zᵀPz = r̃ᵀr̃̈ + ‖r̃̇‖², z = (r̃, ω̃), for the error
/// dynamics linearized at the identity equilibrium:
///   r̃̇ = S(ω)ᵀr̃ + D̄(ω̃ − k_R r̃),  ω̃̇ = J⁻¹S(ω)ᵀJω̃ − k_l J⁻²r̃,
///   D̄̇ = S(ω)ᵀD̄ + D̄S(ω).
/// The S(ω̇)ᵀr̃ term of r̃̈ drops out of r̃ᵀr̃̈.
Mat6 v2_rate_form(const Mat3& dbar, const Vec3& omega, const ObserverGains& g,
                  const InertiaMatrix& j) {
  const Mat3 s = skew(omega);
  const Mat3 jinv = j.inverse();
  Mat36 a1;
  a1 << s.transpose() - g.k_R * dbar, dbar;
  Mat36 wdot;
  wdot << -g.k_l * jinv * jinv, jinv * s.transpose() * j.matrix();
  const Mat3 dbar_dot = s.transpose() * dbar + dbar * s;
  Mat36 e;
  e << -g.k_R * Mat3::Identity(), Mat3::Identity();
  const Mat36 a2 = s.transpose() * a1 + dbar_dot * e + dbar * (wdot - g.k_R * a1);
  Mat6 cross = Mat6::Zero();
  cross.topRows<3>() = a2;
  return 0.5 * (cross + cross.transpose()) + a1.transpose() * a1;
}

Mat6 m_matrix(double c, double eps, const Mat3& dbar, const ObserverGains& g,
              const InertiaMatrix& j) {
  Mat6 m = Mat6::Zero();
  m.topLeftCorner<3, 3>() = c * Mat3::Identity() + eps * g.k_R * dbar;
  m.topRightCorner<3, 3>() = -0.5 * eps * dbar;
  m.bottomLeftCorner<3, 3>() = -0.5 * eps * dbar;
  m.bottomRightCorner<3, 3>() = j.matrix() * j.matrix();
  return m;
}

}  // namespace

UlesReport evaluate_ules(const ObserverGains& g, const DirectionSet& dirs, const InertiaMatrix& j,
                         const UlesOptions& opt, Rng& rng, double eps) {
  if (!(opt.c1 > 0.0) || !(opt.c2 > 0.0)) throw InvalidConfig("c1 and c2 must be positive");
  UlesReport rep;
  rep.d = identity_equilibrium_d(dirs);
  rep.eps2 = ules_eps2(g, j, rep.d, opt.c1, opt.c2);
  const Mat3 d = rep.d.asDiagonal();

  // Sampled attitudes (R = I first) and rates in the ‖ω‖ ≤ omega_bound ball
  // (ω = 0 first).
  std::vector<Mat3> dbars{d};
  std::vector<Vec3> omegas{Vec3::Zero()};
  for (std::size_t s = 0; s < opt.samples; ++s) {
    const Mat3 r = sample_uniform_rotation(rng).matrix();
    dbars.push_back(r.transpose() * d * r);
    Vec3 dir = gaussian3(rng);
    dir /= dir.norm();
    const double radius = opt.omega_bound * std::cbrt(std::uniform_real_distribution<>(0, 1)(rng));
    omegas.push_back(radius * dir);
  }

  double w11 = 0.0;
  double w12 = 0.0;
  std::vector<Mat6> forms;
  forms.reserve(dbars.size());
  for (std::size_t s = 0; s < dbars.size(); ++s) {
    const Mat6 p = v2_rate_form(dbars[s], omegas[s], g, j);
    w11 = std::max(w11, spectral_norm(p.topLeftCorner<3, 3>()));
    w12 = std::max(w12, spectral_norm(p.topRightCorner<3, 3>()));
    forms.push_back(p);
  }
  const double dinv2 = 1.0 / rep.d.cwiseAbs2().minCoeff();
  rep.w11_norm = w11;
  rep.w12_norm = w12;
  rep.eps3 = g.k_l * g.k_R / (w12 * dinv2 * w12 + w11);
  rep.eps = eps;

  rep.matrices = {MatrixCheck{"M1", kInf}, MatrixCheck{"M2", kInf}, MatrixCheck{"W", kInf}};
  Mat6 base = Mat6::Zero();
  base.topLeftCorner<3, 3>() = g.k_l * g.k_R * Mat3::Identity();
  for (std::size_t s = 0; s < dbars.size(); ++s) {
    rep.matrices[0].min_eigenvalue =
        std::min(rep.matrices[0].min_eigenvalue, min_eig(m_matrix(opt.c1, eps, dbars[s], g, j)));
    rep.matrices[1].min_eigenvalue =
        std::min(rep.matrices[1].min_eigenvalue, min_eig(m_matrix(opt.c2, eps, dbars[s], g, j)));
    rep.matrices[2].min_eigenvalue =
        std::min(rep.matrices[2].min_eigenvalue, min_eig(base + eps * forms[s]));
  }
  return rep;
}

UlesReport ules_certificate(const ObserverGains& g, const DirectionSet& dirs,
                            const InertiaMatrix& j, const UlesOptions& opt, Rng& rng) {
  // First pass only for ε₂, ε₃ (they do not depend on ε); reuse the same
  // samples for the checks by re-seeding from a copy of the stream.
  Rng copy = rng;
  const UlesReport probe = evaluate_ules(g, dirs, j, opt, copy, 0.0);
  const double eps = opt.eps_fraction * std::min(probe.eps2, probe.eps3);
  UlesReport rep = evaluate_ules(g, dirs, j, opt, rng, eps);
  if (!rep.certified()) {
    std::ostringstream os;
    os << "ULES certificate failed at eps = " << eps << ":";
    for (const MatrixCheck& m : rep.matrices) {
      if (!m.positive_definite()) os << " " << m.name << " min eigenvalue " << m.min_eigenvalue;
    }
    throw CertificateFailed(os.str());
  }
  return rep;
}

namespace {

/// Attitude error of angle in (0, max_angle] about a uniform axis.
RotationMatrix sample_small_rotation(Rng& rng, double max_angle) {
  Vec3 axis = gaussian3(rng);
  axis /= axis.norm();
  const double angle = max_angle * std::uniform_real_distribution<>(0.0, 1.0)(rng);
  return exp_so3(std::max(angle, 1e-8) * axis);
}

}  // namespace

QuadraticBounds estimate_c1_c2(const ObserverGains& g, const DirectionSet& dirs, Rng& rng,
                               std::size_t samples, double eps_bar) {
  QuadraticBounds b{kInf, 0.0, 0};
  for (std::size_t s = 0; s < samples; ++s) {
    const RotationMatrix rt = sample_small_rotation(rng, 1.0);
    const double r = attitude_residual(rt, dirs).norm();
    if (r > eps_bar || r < 1e-9) continue;
    const double ratio = attitude_term(rt, g, dirs) / (r * r);
    b.c1 = std::min(b.c1, ratio);
    b.c2 = std::max(b.c2, ratio);
    ++b.n_samples;
  }
  if (b.n_samples == 0) throw std::runtime_error("no attitude sample satisfied |r_k| <= eps_bar");
  return b;
}

double estimate_eps1(const ObserverGains& g, const DirectionSet& dirs, Rng& rng,
                     std::size_t samples, double eps_bar) {
  // Half the samples uniform over SO(3), half concentrated near the identity
  // where the sublevel boundary lies.
  std::vector<std::pair<double, double>> pts;  // (attitude term, ‖r̃_k‖)
  pts.reserve(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    const RotationMatrix rt =
        s % 2 == 0 ? sample_uniform_rotation(rng) : sample_small_rotation(rng, 1.0);
    pts.emplace_back(attitude_term(rt, g, dirs), attitude_residual(rt, dirs).norm());
  }
  std::sort(pts.begin(), pts.end());
  // Level of the first sample (by increasing V) that violates the radius
  // bound: every sample strictly below it satisfies ‖r̃_k‖ ≤ eps_bar.
  for (const auto& [v, r] : pts) {
    if (r > eps_bar) return v;
  }
  return pts.back().first;
}

}  // namespace rotobs
