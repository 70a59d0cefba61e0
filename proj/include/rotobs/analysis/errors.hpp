#pragma once

#include "rotobs/observers.hpp"
#include "rotobs/rigid_body.hpp"
#include "rotobs/sensing.hpp"

#include <array>

namespace rotobs {

/// R̃ = R̂Rᵀ, ω̃ = ω̂ − ω, b̃ = b̂ − b, ℓ̃ = ℓ̂ − RJω.
struct ErrorState {
  RotationMatrix R_tilde;
  Vec3 omega_tilde = Vec3::Zero();
  Vec3 b_tilde = Vec3::Zero();
  Vec3 l_tilde = Vec3::Zero();
};

/// Errors of the raw observer state, with ω̂ = J⁻¹R̂ᵀℓ̂.
ErrorState error_state(const RigidBodyState& truth, const ObserverState& est, const Vec3& bias,
                       const InertiaMatrix& j);

/// Errors of the estimates a variant reports (see reported_estimates()).
ErrorState reported_error_state(ObserverVariant variant, const RigidBodyState& truth,
                                const ObserverState& est, const Vec3& bias,
                                const MeasurementSet& meas, const InertiaMatrix& j);

/// Which Lyapunov function to evaluate.
///  1: k_l Σ(kᵢ/2)‖R̃vᵢ − vᵢ‖² + ½‖ℓ̃‖²
///  2: k_b Σ(kᵢ/2)‖R̃vᵢ − vᵢ‖² + ½‖b̃‖²
///  3: k_l k_b Σ(kᵢ/2)‖R̃vᵢ − vᵢ‖² + (k_l/2)(1 − α)‖b̃‖² + (k_b/2)α‖ℓ̃‖²
enum class LyapunovForm { AngularMomentum = 1, Complementary = 2, Fused = 3 };

/// The Lyapunov form matching an observer variant (3 and 4 share form 3).
LyapunovForm lyapunov_form(ObserverVariant variant);

double lyapunov_v1(LyapunovForm form, const ErrorState& err, const ObserverGains& gains,
                   const DirectionSet& dirs);

/// V̇₁ of form 3 along the true-attitude fused observer:
/// −k_l k_b k_R‖r̃‖² − α(1 − α) k_l k_b k_a ‖δ̃_L‖².
double lyapunov_v1_rate(const ObserverGains& gains, const Vec3& r_tilde, const Vec3& delta_L);

/// D₀ = I, D₁ = diag(1, −1, −1), D₂ = diag(−1, 1, −1), D₃ = diag(−1, −1, 1).
Mat3 equilibrium_sign_matrix(int index);

/// U Dᵢ Uᵀ with U the eigenbasis of M.
RotationMatrix equilibrium_rotation(const DirectionSet& dirs, int index);

/// All four U Dᵢ Uᵀ, i = 0..3.
std::array<RotationMatrix, 4> equilibrium_rotations(const DirectionSet& dirs);

/// Ψ(R̃, U Dᵢ Uᵀ) for i = 0..3.
std::array<double, 4> psi_to_equilibria(const RotationMatrix& r_tilde, const DirectionSet& dirs);
std::array<double, 4> psi_to_equilibria(const RotationMatrix& r_tilde,
                                        const std::array<RotationMatrix, 4>& equilibria);

/// r_k(R) = Σ kᵢ S(Rᵀvᵢ)vᵢ (noise-free innovation with R̂ = I composed on R̃).
Vec3 attitude_residual(const RotationMatrix& r, const DirectionSet& dirs);

/// ṙ_k at R = U diag(s) Uᵀ (s ∈ {±1}³, det = +1) moving with Ṙ = RS(ω):
/// U diag(s₂λ₂ + s₃λ₃, s₁λ₁ + s₃λ₃, s₁λ₁ + s₂λ₂) Uᵀ ω.
Vec3 residual_rate_at_equilibrium(const DirectionSet& dirs, int index, const Vec3& omega);

}  // namespace rotobs
