#pragma once

#include "rotobs/analysis/simulation.hpp"
#include "rotobs/observers.hpp"
#include "rotobs/rng.hpp"
#include "rotobs/sensing.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace rotobs {

/// One inequality checked pointwise along a trajectory (or over samples).
struct InequalityCheck {
  std::string name;
  /// Human-readable statement, e.g. "|r_k| <= K1".
  std::string statement;
  std::size_t n_samples = 0;
  std::size_t n_violations = 0;
  /// min over samples of (bound − value); negative when violated.
  double worst_margin = 0.0;
  /// Time (or sample index) of the worst margin.
  double worst_at = 0.0;
  /// Checks resting on a bound that the stability argument only states
  /// informally (or that is known not to hold in general) are reported but do
  /// not count as certified.
  bool certified = true;

  bool holds() const { return n_violations == 0; }
};

/// Constants of the uniform-stability argument for the angular-momentum
/// observer, evaluated on a concrete trajectory.
struct ProofCertificate {
  /// ‖r̃_k‖ bounds: the root-sum-square form (Σkᵢ²)^{1/2}, which does not hold
  /// for every attitude, and the triangle bound Σkᵢ‖vᵢ‖².
  double K1_root_sum_sq = 0.0;
  double K1_triangle = 0.0;
  /// The K₁ propagated into the remaining constants (the triangle bound,
  /// which is valid for every attitude).
  double K1 = 0.0;
  double K2 = 0.0;
  double K3 = 0.0;
  double K4 = 0.0;
  double K5 = 0.0;
  double K6 = 0.0;
  double K7 = 0.0;
  double K8 = 0.0;
  double K9 = 0.0;
  double K = 0.0;
  /// K̄ = K₉ + K, the constant of the combined inequality.
  double K_bar = 0.0;
  /// K̄ without the K term, i.e. K₉ alone (reported for comparison).
  double K_bar_k9_only = 0.0;
  double gamma = 0.0;
  /// Analytic lower bound λ_min(J⁻¹)² min dⱼ² on γ.
  double gamma_lower_bound = 0.0;
  /// D = diag(λ₂ + λ₃, λ₁ + λ₃, λ₁ + λ₂) at the identity equilibrium.
  Vec3 d = Vec3::Zero();
  std::vector<InequalityCheck> holds;

  /// True when every certified check holds.
  bool certified_inequalities_hold() const;
  const InequalityCheck& check(const std::string& name) const;
};

/// D at the identity equilibrium: (λ₂ + λ₃, λ₁ + λ₃, λ₁ + λ₂).
Vec3 identity_equilibrium_d(const DirectionSet& dirs);

/// γ = inf over R ∈ SO(3) of λ_min(RJ⁻¹Rᵀ D² RJ⁻¹Rᵀ) with D = diag(d):
/// minimum over `samples` uniform rotations followed by a Nelder–Mead
/// refinement in quaternion coordinates.
double gamma_infimum(const InertiaMatrix& j, const Vec3& d, Rng& rng, std::size_t samples = 100000);

/// Evaluates the constants on rows of a noise-free angular-momentum-observer
/// run (one row per observer step, uniformly spaced) and checks the chain
/// inequalities pointwise. Time derivatives of r̃_k, r_k are central finite
/// differences on the row grid. v1_0 is V₁ at t = 0.
ProofCertificate proof_constants(const std::vector<SampleRow>& rows, const ObserverGains& gains,
                                 const DirectionSet& dirs, const InertiaMatrix& j,
                                 const TorqueProfile& torque, double v1_0, Rng& rng,
                                 std::size_t gamma_samples = 100000);

/// Thrown by ules_certificate when a matrix is not positive definite.
class CertificateFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MatrixCheck {
  std::string name;
  /// Minimum eigenvalue over every sampled (R, ω).
  double min_eigenvalue = 0.0;
  bool positive_definite() const { return min_eigenvalue > 0.0; }
};

struct UlesOptions {
  double c1 = 0.1;
  double c2 = 0.1;
  /// ‖ω‖ bound (K₃) over which the W blocks are sampled.
  double omega_bound = 1.0;
  /// Sampled attitudes / rates for the block norms and eigenvalue checks.
  std::size_t samples = 2000;
  /// ε = fraction · min(ε₂, ε₃).
  double eps_fraction = 0.5;
};

struct UlesReport {
  Vec3 d = Vec3::Zero();
  double eps2 = 0.0;
  double eps3 = 0.0;
  double eps = 0.0;
  /// Sampled suprema of the W-block norms entering ε₃ (estimate-based).
  double w11_norm = 0.0;
  double w12_norm = 0.0;
  /// M₁, M₂, W in that order.
  std::array<MatrixCheck, 3> matrices;

  bool certified() const;
};

/// ε₂ in closed form: min over i ∈ {1,2}, j of (2λ_min(J²)k_R/dⱼ)(1 + √(1 + cᵢ/(λ_min(J²)k_R²))).
double ules_eps2(const ObserverGains& gains, const InertiaMatrix& j, const Vec3& d, double c1,
                 double c2);

/// The three matrices at a given ε, evaluated at D̄ = RᵀDR for sampled R
/// (and R = I, ω = 0). ε₃ and the W-block norms are filled in as well.
UlesReport evaluate_ules(const ObserverGains& gains, const DirectionSet& dirs,
                         const InertiaMatrix& j, const UlesOptions& opt, Rng& rng, double eps);

/// ε₂, ε₃ and the positive-definiteness checks at ε = fraction·min(ε₂, ε₃).
/// Throws CertificateFailed naming every failing matrix and its eigenvalue.
UlesReport ules_certificate(const ObserverGains& gains, const DirectionSet& dirs,
                            const InertiaMatrix& j, const UlesOptions& opt, Rng& rng);

/// Empirical c₁, c₂: extreme ratios of k_l Σ(kᵢ/2)‖R̃vᵢ − vᵢ‖² to ‖r̃_k‖² over
/// sampled attitude errors (rotation angle ≤ 1 rad) with ‖r̃_k‖ ≤ eps_bar.
struct QuadraticBounds {
  double c1 = 0.0;
  double c2 = 0.0;
  std::size_t n_samples = 0;
};
QuadraticBounds estimate_c1_c2(const ObserverGains& gains, const DirectionSet& dirs, Rng& rng,
                               std::size_t samples = 20000, double eps_bar = 0.5);

/// Empirical ε₁: the largest level such that every sampled attitude error
/// with k_l Σ(kᵢ/2)‖R̃vᵢ − vᵢ‖² ≤ ε₁ has ‖r̃_k‖ ≤ eps_bar. The ℓ̃ part of V₁
/// only shrinks the sublevel set, so the attitude term alone decides it.
double estimate_eps1(const ObserverGains& gains, const DirectionSet& dirs, Rng& rng,
                     std::size_t samples = 100000, double eps_bar = 0.5);

}  // namespace rotobs
