#pragma once

#include "rotobs/rigid_body.hpp"
#include "rotobs/so3.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace rotobs {

class DegenerateDirections : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NonDistinctSpectrum : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DegenerateMeasurement : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Minimum pairwise gap between eigenvalues of M = Σ kᵢvᵢvᵢᵀ.
inline constexpr double kSpectrumGapTol = 1e-6;

/// Known inertial directions vᵢ with their innovation weights kᵢ.
///
/// Caches M = Σ kᵢvᵢvᵢᵀ = UΛUᵀ with Λ ascending and det U = +1 (the last
/// eigenvector is flipped when needed).
class DirectionSet {
 public:
  DirectionSet(std::vector<Vec3> directions, std::vector<double> weights);

  std::size_t size() const { return v_.size(); }
  const std::vector<Vec3>& directions() const { return v_; }
  const std::vector<double>& weights() const { return k_; }
  const Vec3& direction(std::size_t i) const { return v_[i]; }
  double weight(std::size_t i) const { return k_[i]; }

  const Mat3& m() const { return m_; }
  const Mat3& m_inverse() const { return m_inv_; }
  /// λ₁ < λ₂ < λ₃.
  const Vec3& eigenvalues() const { return lambda_; }
  const RotationMatrix& eigenbasis() const { return u_; }

 private:
  std::vector<Vec3> v_;
  std::vector<double> k_;
  Mat3 m_;
  Mat3 m_inv_;
  Vec3 lambda_;
  RotationMatrix u_;
};

/// {v1, v2, v1 × v2} with the given weights.
///
/// Throws DegenerateDirections when v1 or v2 vanish or are parallel, and
/// NonDistinctSpectrum when M has repeated eigenvalues.
DirectionSet make_direction_set(const Vec3& v1, const Vec3& v2, std::span<const double> weights);

struct DirectionPair {
  Vec3 v1;
  Vec3 v2;
};

/// v1 = (0, 0, −1); v̄2 ~ N(0, I) with its last entry set to −0.1, and
/// v2 = v̄2 / ‖v̄2‖₁. Note ‖v2‖₂ ≠ 1 in general.
DirectionPair sample_direction_pair(Rng& rng);

struct MeasurementSet {
  double t = 0.0;
  Vec3 y0 = Vec3::Zero();
  std::vector<Vec3> y;
};

struct NoiseConfig {
  double sigma = 0.1;
  bool enabled = false;
  double h_meas = 0.002;

  void validate() const;
};

/// y₀ = ω + b (+ σn₀), yᵢ = Rᵀvᵢ.
///
/// With noise enabled each ȳᵢ = Rᵀvᵢ + σnᵢ is rescaled to the length of vᵢ,
/// i.e. yᵢ = ‖vᵢ‖ ȳᵢ/‖ȳᵢ‖, which is the unit normalization for unit vᵢ.
/// Throws DegenerateMeasurement if ‖ȳᵢ‖ < 1e-9.
MeasurementSet measure(const RigidBodyState& state, const Vec3& bias, const DirectionSet& dirs,
                       const NoiseConfig& noise, Rng& rng, double t = 0.0);

/// Noise-free measurement; needs no generator.
MeasurementSet measure_exact(const RigidBodyState& state, const Vec3& bias,
                             const DirectionSet& dirs, double t = 0.0);

/// Everything that defines one simulation: truth initial state, the constant
/// gyro bias, the observer initial condition, inertia and directions.
struct Scenario {
  RigidBodyState truth0;
  Vec3 bias = Vec3::Zero();
  UnitQuaternion q_hat0;
  Vec3 b_hat0 = Vec3::Zero();
  Vec3 l_hat0 = Vec3::Zero();
  InertiaMatrix inertia = InertiaMatrix::identity();
  DirectionSet dirs;
};

/// Default innovation weights k = (1.1, 1.2, 1.3).
std::vector<double> default_weights();

/// The fixed realization of the ideal-setting example. The two-decimal
/// matrices are projected onto SO(3) and the two-decimal directions v1, v2 are
/// normalized before forming v3 = v1 × v2.
Scenario paper_scenario(std::span<const double> weights);

/// Draws R₀, b, ω₀ ~ N(0, 0.1 I), R̂₀, b̂₀, ℓ̂₀, J and the directions, in that
/// order. Direction pairs with a degenerate spectrum are redrawn.
Scenario sample_scenario(Rng& rng, std::span<const double> weights);

}  // namespace rotobs
