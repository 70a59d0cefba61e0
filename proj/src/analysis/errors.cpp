#include "rotobs/analysis/errors.hpp"

#include <stdexcept>

namespace rotobs {

ErrorState error_state(const RigidBodyState& truth, const ObserverState& est, const Vec3& bias,
                       const InertiaMatrix& j) {
  const RotationMatrix r = quat_to_rot(truth.q);
  const RotationMatrix r_hat = quat_to_rot(est.q_hat);
  return {r_hat * r.transpose(), omega_hat(est, j) - truth.omega, est.b_hat - bias,
          est.l_hat - r.matrix() * (j.matrix() * truth.omega)};
}

ErrorState reported_error_state(ObserverVariant variant, const RigidBodyState& truth,
                                const ObserverState& est, const Vec3& bias,
                                const MeasurementSet& meas, const InertiaMatrix& j) {
  const RotationMatrix r = quat_to_rot(truth.q);
  const ReportedEstimates rep = reported_estimates(variant, est, meas, j);
  return {rep.r_hat * r.transpose(), rep.omega_hat - truth.omega, rep.b_hat - bias,
          est.l_hat - r.matrix() * (j.matrix() * truth.omega)};
}

LyapunovForm lyapunov_form(ObserverVariant variant) {
  switch (variant) {
    case ObserverVariant::AngularMomentum:
      return LyapunovForm::AngularMomentum;
    case ObserverVariant::Complementary:
      return LyapunovForm::Complementary;
    case ObserverVariant::FusedTrueAttitude:
    case ObserverVariant::Fused:
      break;
  }
  return LyapunovForm::Fused;
}

double lyapunov_v1(LyapunovForm form, const ErrorState& err, const ObserverGains& g,
                   const DirectionSet& dirs) {
  double attitude = 0.0;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const Vec3& v = dirs.direction(i);
    attitude += 0.5 * dirs.weight(i) * (err.R_tilde.matrix() * v - v).squaredNorm();
  }
  switch (form) {
    case LyapunovForm::AngularMomentum:
      return g.k_l * attitude + 0.5 * err.l_tilde.squaredNorm();
    case LyapunovForm::Complementary:
      return g.k_b * attitude + 0.5 * err.b_tilde.squaredNorm();
    case LyapunovForm::Fused:
      break;
  }
  return g.k_l * g.k_b * attitude + 0.5 * g.k_l * (1.0 - g.alpha) * err.b_tilde.squaredNorm() +
         0.5 * g.k_b * g.alpha * err.l_tilde.squaredNorm();
}

double lyapunov_v1_rate(const ObserverGains& g, const Vec3& r_tilde, const Vec3& delta_L) {
  return -g.k_l * g.k_b * g.k_R * r_tilde.squaredNorm() -
         g.alpha * (1.0 - g.alpha) * g.k_l * g.k_b * g.k_a * delta_L.squaredNorm();
}

Mat3 equilibrium_sign_matrix(int index) {
  switch (index) {
    case 0:
      return Mat3::Identity();
    case 1:
      return Vec3(1.0, -1.0, -1.0).asDiagonal();
    case 2:
      return Vec3(-1.0, 1.0, -1.0).asDiagonal();
    case 3:
      return Vec3(-1.0, -1.0, 1.0).asDiagonal();
    default:
      throw std::out_of_range("equilibrium index must be 0..3");
  }
}

RotationMatrix equilibrium_rotation(const DirectionSet& dirs, int index) {
  const Mat3& u = dirs.eigenbasis().matrix();
  return RotationMatrix(u * equilibrium_sign_matrix(index) * u.transpose());
}

std::array<RotationMatrix, 4> equilibrium_rotations(const DirectionSet& dirs) {
  return {equilibrium_rotation(dirs, 0), equilibrium_rotation(dirs, 1),
          equilibrium_rotation(dirs, 2), equilibrium_rotation(dirs, 3)};
}

std::array<double, 4> psi_to_equilibria(const RotationMatrix& r_tilde,
                                        const std::array<RotationMatrix, 4>& equilibria) {
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i) out[i] = psi_metric(r_tilde, equilibria[i]);
  return out;
}

std::array<double, 4> psi_to_equilibria(const RotationMatrix& r_tilde, const DirectionSet& dirs) {
  return psi_to_equilibria(r_tilde, equilibrium_rotations(dirs));
}

Vec3 attitude_residual(const RotationMatrix& r, const DirectionSet& dirs) {
  Vec3 acc = Vec3::Zero();
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const Vec3& v = dirs.direction(i);
    acc += dirs.weight(i) * skew(r.matrix().transpose() * v) * v;
  }
  return acc;
}

Vec3 residual_rate_at_equilibrium(const DirectionSet& dirs, int index, const Vec3& omega) {
  const Vec3 s = equilibrium_sign_matrix(index).diagonal();
  const Vec3& l = dirs.eigenvalues();
  const Vec3 d(s(1) * l(1) + s(2) * l(2), s(0) * l(0) + s(2) * l(2), s(0) * l(0) + s(1) * l(1));
  const Mat3& u = dirs.eigenbasis().matrix();
  return u * d.asDiagonal() * u.transpose() * omega;
}

}  // namespace rotobs
