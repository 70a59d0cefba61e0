#pragma once

#include "rotobs/so3.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace rotobs {

/// Ground truth: attitude (body → inertial) and body-frame angular velocity.
struct RigidBodyState {
  UnitQuaternion q;
  Vec3 omega = Vec3::Zero();
};

struct RigidBodyDerivative {
  Vec4 q_dot;
  Vec3 omega_dot;
};

class TorqueProfile {
 public:
  enum class Kind { SinusoidPaper, Zero, Constant };

  /// τ(t) = (sin(t + 1), sin(2t + 2), sin(3t + 3)).
  static TorqueProfile sinusoid() { return TorqueProfile(Kind::SinusoidPaper, Vec3::Zero()); }
  static TorqueProfile zero() { return TorqueProfile(Kind::Zero, Vec3::Zero()); }
  static TorqueProfile constant(const Vec3& tau);

  Kind kind() const { return kind_; }
  const Vec3& constant_value() const { return value_; }

 private:
  TorqueProfile(Kind kind, const Vec3& value) : kind_(kind), value_(value) {}

  Kind kind_;
  Vec3 value_;
};

Vec3 torque_at(const TorqueProfile& profile, double t);

class InvalidConfig : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Step sizes of the dual-rate simulation. The truth grid refines the
/// observer grid by an integer factor so observer samples never interpolate.
struct IntegratorConfig {
  double h_truth = 1e-4;
  double h_obs = 1e-3;
  double duration = 10.0;

  /// Throws InvalidConfig unless 0 < h_truth ≤ h_obs, h_obs/h_truth is an
  /// integer and duration > 0.
  void validate() const;
  /// h_obs / h_truth.
  int truth_steps_per_observer_step() const;
  /// Number of observer steps covering the duration (rounded to nearest).
  int observer_steps() const;
};

/// Thrown when an integration step produces a non-finite value.
class NonFiniteState : public std::runtime_error {
 public:
  NonFiniteState(const std::string& what, double t) : std::runtime_error(what), t_(t) {}
  double time() const { return t_; }

 private:
  double t_;
};

/// q̇ = ½Q(q)(0, ω), ω̇ = J⁻¹(S(Jω)ω + τ).
RigidBodyDerivative dynamics_derivative(const RigidBodyState& state, const InertiaMatrix& j,
                                        const Vec3& tau);

/// Classic fixed-step RK4 on a fixed-size vector, with f(t, x) the field.
template <int N, class Field>
Eigen::Matrix<double, N, 1> rk4_step(Field&& f, const Eigen::Matrix<double, N, 1>& x, double t,
                                     double h) {
  const Eigen::Matrix<double, N, 1> k1 = f(t, x);
  const Eigen::Matrix<double, N, 1> k2 = f(t + 0.5 * h, x + 0.5 * h * k1);
  const Eigen::Matrix<double, N, 1> k3 = f(t + 0.5 * h, x + 0.5 * h * k2);
  const Eigen::Matrix<double, N, 1> k4 = f(t + h, x + h * k3);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

using TruthVector = Eigen::Matrix<double, 7, 1>;
TruthVector pack(const RigidBodyState& s);
/// Unpacks and projects the quaternion part onto the unit sphere.
RigidBodyState unpack_projected(const TruthVector& x);

/// One RK4 step of the rigid-body dynamics followed by quaternion
/// renormalization. Throws NonFiniteState.
RigidBodyState rk4_step(const RigidBodyState& state, const InertiaMatrix& j,
                        const TorqueProfile& profile, double t, double h);

/// Truth sampled on the h_truth grid: states[k] is at t = k·h_truth.
struct TruthTrajectory {
  double h = 0.0;
  std::vector<RigidBodyState> states;

  double time(std::size_t k) const { return static_cast<double>(k) * h; }
};

TruthTrajectory simulate_truth(const RigidBodyState& init, const InertiaMatrix& j,
                               const TorqueProfile& profile, const IntegratorConfig& cfg);

}  // namespace rotobs
