#pragma once

#include "rotobs/sensing.hpp"
#include "rotobs/so3.hpp"

#include <optional>
#include <string>

namespace rotobs {

/// Observer family.
///  1: angular-momentum observer (attitude + ℓ̂, no bias estimate).
///  2: explicit complementary filter with bias correction (attitude + b̂).
///  3: fused observer using the true attitude R in its innovations
///     (analysis only; not implementable from measurements).
///  4: fused observer with R replaced by the reconstruction R̄.
enum class ObserverVariant { AngularMomentum = 1, Complementary = 2, FusedTrueAttitude = 3, Fused = 4 };

int variant_number(ObserverVariant v);
/// Throws InvalidConfig for numbers outside 1..4.
ObserverVariant variant_from_number(int n);

struct ObserverGains {
  double k_R = 2.0;
  double k_l = 2.0;
  double k_a = 1.0;
  double k_b = 4.0;
  double alpha = 0.3;

  /// Throws InvalidConfig unless all gains are positive and α ∈ [0, 1].
  void validate() const;
};

/// Observer state. Each variant uses a subset: variant 1 leaves b̂ constant,
/// variant 2 leaves ℓ̂ constant.
struct ObserverState {
  Vec3 b_hat = Vec3::Zero();
  Vec3 l_hat = Vec3::Zero();
  UnitQuaternion q_hat;
};

/// Packed (b̂, ℓ̂, q̂) with q̂ as raw (w, x, y, z) coefficients.
using ObserverVector = Eigen::Matrix<double, 10, 1>;
ObserverVector pack(const ObserverState& s);
/// Unpacks and projects q̂ onto the unit sphere.
ObserverState unpack_projected(const ObserverVector& x);

struct ObserverDerivative {
  Vec3 b_hat_dot = Vec3::Zero();
  Vec3 l_hat_dot = Vec3::Zero();
  Vec4 q_hat_dot = Vec4::Zero();
};

/// Everything an observer consumes at one instant besides its own state.
struct ObserverInput {
  MeasurementSet meas;
  /// Known applied torque.
  Vec3 tau = Vec3::Zero();
  /// True attitude; variant 3 always reads it, variants 1 and 4 only when
  /// use_true_attitude is set.
  std::optional<Mat3> r_true;
  /// Replace R̄ by the true attitude in variants 1 and 4 (diagnostic studies
  /// only: the result is no longer implementable from measurements).
  bool use_true_attitude = false;
};

struct InnovationTerms {
  Vec3 r_tilde = Vec3::Zero();
  Vec3 delta_L = Vec3::Zero();
  /// Attitude used in the innovations: R̄ for variants 1, 2, 4, true R for 3.
  /// Not orthogonal under noise.
  Mat3 r_bar = Mat3::Identity();
};

/// r̃ = Σ kᵢ S(E(q̂)ᵀvᵢ) yᵢ. Accepts non-unit coefficients.
Vec3 innovation_rk(const Vec4& q_hat, const MeasurementSet& meas, const DirectionSet& dirs);
Vec3 innovation_rk(const UnitQuaternion& q_hat, const MeasurementSet& meas,
                   const DirectionSet& dirs);

/// R̄ = M⁻¹ Σ kᵢ vᵢ yᵢᵀ; equals R for noise-free measurements.
Mat3 reconstruct_rbar(const MeasurementSet& meas, const DirectionSet& dirs);

/// δ̃_L = R̄ᵀℓ̂ − J(y₀ − b̂).
Vec3 delta_L(const Vec3& l_hat, const Mat3& r_bar, const Vec3& y0, const Vec3& b_hat,
             const InertiaMatrix& j);

/// Innovations of a variant at packed state x (δ̃_L is zero for variant 2).
InnovationTerms innovation_terms(ObserverVariant variant, const ObserverVector& x,
                                 const ObserverInput& in, const InertiaMatrix& j,
                                 const DirectionSet& dirs);

/// Continuous-time field of the variant on the packed state. The quaternion
/// part may be non-unit (Runge-Kutta stages).
ObserverVector observer_field(ObserverVariant variant, const ObserverVector& x,
                              const ObserverInput& in, const InertiaMatrix& j,
                              const ObserverGains& gains, const DirectionSet& dirs);

ObserverDerivative observer1_derivative(const ObserverState& s, const ObserverInput& in,
                                        const InertiaMatrix& j, const ObserverGains& gains,
                                        const DirectionSet& dirs);
ObserverDerivative observer2_derivative(const ObserverState& s, const ObserverInput& in,
                                        const ObserverGains& gains, const DirectionSet& dirs);
/// Requires in.r_true.
ObserverDerivative observer3_derivative(const ObserverState& s, const ObserverInput& in,
                                        const InertiaMatrix& j, const ObserverGains& gains,
                                        const DirectionSet& dirs);
ObserverDerivative observer4_derivative(const ObserverState& s, const ObserverInput& in,
                                        const InertiaMatrix& j, const ObserverGains& gains,
                                        const DirectionSet& dirs);
ObserverDerivative observer_derivative(ObserverVariant variant, const ObserverState& s,
                                       const ObserverInput& in, const InertiaMatrix& j,
                                       const ObserverGains& gains, const DirectionSet& dirs);

/// Inputs at the start, midpoint and end of one RK4 step.
struct StageInputs {
  const ObserverInput& start;
  const ObserverInput& mid;
  const ObserverInput& end;
};

/// One RK4 step followed by quaternion renormalization. This overload holds
/// the input constant across the four stages. Throws NonFiniteState.
ObserverState observer_step(ObserverVariant variant, const ObserverState& s,
                            const ObserverInput& in, const InertiaMatrix& j,
                            const ObserverGains& gains, const DirectionSet& dirs, double h,
                            double t = 0.0);

/// As above, with stage-specific inputs.
ObserverState observer_step(ObserverVariant variant, const ObserverState& s,
                            const StageInputs& in, const InertiaMatrix& j,
                            const ObserverGains& gains, const DirectionSet& dirs, double h,
                            double t = 0.0);

/// ω̂ = J⁻¹E(q̂)ᵀℓ̂.
Vec3 omega_hat(const ObserverState& s, const InertiaMatrix& j);

/// The (R̂, ω̂, b̂) triple a variant reports. Variant 1 has no bias state and
/// reports b̂ = y₀ − ω̂; variant 2 has no rate state and reports ω̂ = y₀ − b̂;
/// variants 3 and 4 report ω̂ = J⁻¹R̂ᵀℓ̂ and their b̂.
struct ReportedEstimates {
  RotationMatrix r_hat;
  Vec3 omega_hat;
  Vec3 b_hat;
};
ReportedEstimates reported_estimates(ObserverVariant variant, const ObserverState& s,
                                     const MeasurementSet& meas, const InertiaMatrix& j);

}  // namespace rotobs
