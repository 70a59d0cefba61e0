#include "rotobs/observers.hpp"

#include "rotobs/rigid_body.hpp"

#include <stdexcept>

namespace rotobs {

int variant_number(ObserverVariant v) { return static_cast<int>(v); }

ObserverVariant variant_from_number(int n) {
  if (n < 1 || n > 4) throw InvalidConfig("observer variant must be 1, 2, 3 or 4");
  return static_cast<ObserverVariant>(n);
}

void ObserverGains::validate() const {
  for (const auto& [name, value] : {std::pair{"k_R", k_R}, std::pair{"k_l", k_l},
                                    std::pair{"k_a", k_a}, std::pair{"k_b", k_b}}) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw InvalidConfig(std::string("gain ") + name + " must be positive");
    }
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidConfig("alpha must lie in [0, 1]");
}

ObserverVector pack(const ObserverState& s) {
  ObserverVector x;
  x << s.b_hat, s.l_hat, s.q_hat.coeffs();
  return x;
}

ObserverState unpack_projected(const ObserverVector& x) {
  return {x.segment<3>(0), x.segment<3>(3), UnitQuaternion::normalized(x.segment<4>(6))};
}

Vec3 innovation_rk(const Vec4& q_hat, const MeasurementSet& meas, const DirectionSet& dirs) {
  const Mat3 e_t = quat_to_matrix(q_hat).transpose();
  Vec3 r = Vec3::Zero();
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    r += dirs.weight(i) * skew(e_t * dirs.direction(i)) * meas.y[i];
  }
  return r;
}

Vec3 innovation_rk(const UnitQuaternion& q_hat, const MeasurementSet& meas,
                   const DirectionSet& dirs) {
  return innovation_rk(q_hat.coeffs(), meas, dirs);
}

Mat3 reconstruct_rbar(const MeasurementSet& meas, const DirectionSet& dirs) {
  Mat3 acc = Mat3::Zero();
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    acc += dirs.weight(i) * dirs.direction(i) * meas.y[i].transpose();
  }
  return dirs.m_inverse() * acc;
}

Vec3 delta_L(const Vec3& l_hat, const Mat3& r_bar, const Vec3& y0, const Vec3& b_hat,
             const InertiaMatrix& j) {
  return r_bar.transpose() * l_hat - j.matrix() * (y0 - b_hat);
}

namespace {

const Mat3& true_attitude(const ObserverInput& in) {
  if (!in.r_true) {
    throw std::invalid_argument("observer variant 3 requires the true attitude");
  }
  return *in.r_true;
}

}  // namespace

InnovationTerms innovation_terms(ObserverVariant variant, const ObserverVector& x,
                                 const ObserverInput& in, const InertiaMatrix& j,
                                 const DirectionSet& dirs) {
  InnovationTerms t;
  t.r_tilde = innovation_rk(Vec4(x.segment<4>(6)), in.meas, dirs);
  const bool truth = variant == ObserverVariant::FusedTrueAttitude ||
                     (in.use_true_attitude && variant != ObserverVariant::Complementary);
  t.r_bar = truth ? true_attitude(in) : reconstruct_rbar(in.meas, dirs);
  if (variant != ObserverVariant::Complementary) {
    t.delta_L = delta_L(x.segment<3>(3), t.r_bar, in.meas.y0, x.segment<3>(0), j);
  }
  return t;
}

ObserverVector observer_field(ObserverVariant variant, const ObserverVector& x,
                              const ObserverInput& in, const InertiaMatrix& j,
                              const ObserverGains& g, const DirectionSet& dirs) {
  const Vec3 b_hat = x.segment<3>(0);
  const Vec3 l_hat = x.segment<3>(3);
  const Vec4 q_hat = x.segment<4>(6);
  const Vec3& y0 = in.meas.y0;
  const InnovationTerms it = innovation_terms(variant, x, in, j, dirs);
  const Vec3& r = it.r_tilde;
  const Mat3& rb = it.r_bar;
  const Mat3& j_inv = j.inverse();

  Vec3 b_dot = Vec3::Zero();
  Vec3 l_dot = Vec3::Zero();
  Vec3 w_in;
  // The expressions are arranged so that the fused field at α = 1 reproduces
  // variant 1's q̂ and ℓ̂ channels, and at α = 0 variant 2's q̂ and b̂
  // channels, bit for bit (0·x and 1·x are exact).
  switch (variant) {
    case ObserverVariant::AngularMomentum:
      w_in = j_inv * (rb.transpose() * l_hat) - g.k_R * r;
      l_dot = rb * (in.tau - g.k_l * (j_inv * r));
      break;
    case ObserverVariant::Complementary:
      b_dot = g.k_b * r;
      w_in = (y0 - b_hat) - g.k_R * r;
      break;
    case ObserverVariant::FusedTrueAttitude:
    case ObserverVariant::Fused:
      // ω-input αJ⁻¹R̄ᵀℓ̂ + (1 − α)(y₀ − b̂) equals (y₀ − b̂) + αJ⁻¹δ̃_L.
      b_dot = g.k_b * r - g.alpha * g.k_b * g.k_a * (j.matrix() * it.delta_L);
      w_in = g.alpha * (j_inv * (rb.transpose() * l_hat)) + (1.0 - g.alpha) * (y0 - b_hat) -
             g.k_R * r;
      l_dot = rb * (in.tau - g.k_l * (j_inv * r) - (1.0 - g.alpha) * g.k_l * g.k_a * it.delta_L);
      break;
  }
  Vec4 pure;
  pure << 0.0, w_in;
  ObserverVector dx;
  dx << b_dot, l_dot, 0.5 * quat_kinematics_matrix(q_hat) * pure;
  return dx;
}

namespace {

ObserverDerivative unpack_derivative(const ObserverVector& dx) {
  return {dx.segment<3>(0), dx.segment<3>(3), dx.segment<4>(6)};
}

}  // namespace

ObserverDerivative observer_derivative(ObserverVariant variant, const ObserverState& s,
                                       const ObserverInput& in, const InertiaMatrix& j,
                                       const ObserverGains& gains, const DirectionSet& dirs) {
  return unpack_derivative(observer_field(variant, pack(s), in, j, gains, dirs));
}

ObserverDerivative observer1_derivative(const ObserverState& s, const ObserverInput& in,
                                        const InertiaMatrix& j, const ObserverGains& gains,
                                        const DirectionSet& dirs) {
  return observer_derivative(ObserverVariant::AngularMomentum, s, in, j, gains, dirs);
}

ObserverDerivative observer2_derivative(const ObserverState& s, const ObserverInput& in,
                                        const ObserverGains& gains, const DirectionSet& dirs) {
  // Variant 2 never touches the inertia.
  static const InertiaMatrix unit = InertiaMatrix::identity();
  return observer_derivative(ObserverVariant::Complementary, s, in, unit, gains, dirs);
}

ObserverDerivative observer3_derivative(const ObserverState& s, const ObserverInput& in,
                                        const InertiaMatrix& j, const ObserverGains& gains,
                                        const DirectionSet& dirs) {
  return observer_derivative(ObserverVariant::FusedTrueAttitude, s, in, j, gains, dirs);
}

ObserverDerivative observer4_derivative(const ObserverState& s, const ObserverInput& in,
                                        const InertiaMatrix& j, const ObserverGains& gains,
                                        const DirectionSet& dirs) {
  return observer_derivative(ObserverVariant::Fused, s, in, j, gains, dirs);
}

ObserverState observer_step(ObserverVariant variant, const ObserverState& s,
                            const StageInputs& in, const InertiaMatrix& j,
                            const ObserverGains& gains, const DirectionSet& dirs, double h,
                            double t) {
  const ObserverVector x = pack(s);
  const ObserverVector k1 = observer_field(variant, x, in.start, j, gains, dirs);
  const ObserverVector k2 = observer_field(variant, x + 0.5 * h * k1, in.mid, j, gains, dirs);
  const ObserverVector k3 = observer_field(variant, x + 0.5 * h * k2, in.mid, j, gains, dirs);
  const ObserverVector k4 = observer_field(variant, x + h * k3, in.end, j, gains, dirs);
  const ObserverVector next = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!next.allFinite() || next.segment<4>(6).norm() < 1e-12) {
    throw NonFiniteState("observer integration produced a non-finite state", t + h);
  }
  return unpack_projected(next);
}

ObserverState observer_step(ObserverVariant variant, const ObserverState& s,
                            const ObserverInput& in, const InertiaMatrix& j,
                            const ObserverGains& gains, const DirectionSet& dirs, double h,
                            double t) {
  return observer_step(variant, s, StageInputs{in, in, in}, j, gains, dirs, h, t);
}

Vec3 omega_hat(const ObserverState& s, const InertiaMatrix& j) {
  return j.inverse() * (quat_to_rot(s.q_hat).matrix().transpose() * s.l_hat);
}

ReportedEstimates reported_estimates(ObserverVariant variant, const ObserverState& s,
                                     const MeasurementSet& meas, const InertiaMatrix& j) {
  const RotationMatrix r_hat = quat_to_rot(s.q_hat);
  switch (variant) {
    case ObserverVariant::AngularMomentum: {
      const Vec3 w = omega_hat(s, j);
      return {r_hat, w, meas.y0 - w};
    }
    case ObserverVariant::Complementary:
      return {r_hat, meas.y0 - s.b_hat, s.b_hat};
    case ObserverVariant::FusedTrueAttitude:
    case ObserverVariant::Fused:
      break;
  }
  return {r_hat, omega_hat(s, j), s.b_hat};
}

}  // namespace rotobs
