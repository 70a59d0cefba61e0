#pragma once

#include "rotobs/observers.hpp"

#include <vector>

namespace rotobs::testing {

// Literal transcription of the reference listing of the fused observer:
//   R      = M \ Σ kᵢ vᵢ yᵢᵀ
//   rtilde = Σ kᵢ S(E(q̂)ᵀvᵢ) yᵢ
//   deltaL = Rᵀℓ̂ − J(y₀ − b̂)
//   deltaR = α J⁻¹ deltaL + y₀ − b̂ − k_R rtilde
//   b̂̇ = k_b rtilde − α k_b k_a J deltaL
//   ℓ̂̇ = R(τ − k_l J⁻¹ rtilde − (1 − α) k_l k_a deltaL)
//   q̂̇ = ½ Q(q̂) [0; deltaR]
// with E(q) = (q₁² − ‖q_v‖²)I + 2q_v q_vᵀ + 2q₁S(q_v) and
// Q(q) = q₁I₄ + [q₁, −q_vᵀ; q_v, S(q_v)].
inline Mat3 ref_skew(const Vec3& a) {
  Mat3 s;
  s << 0, -a(2), a(1), a(2), 0, -a(0), -a(1), a(0), 0;
  return s;
}

inline ObserverVector reference_fused(const ObserverVector& x, const MeasurementSet& m, const Vec3& tau,
                               const Mat3& j, const ObserverGains& g, const std::vector<Vec3>& v,
                               const std::vector<double>& k) {
  const Vec3 bhat = x.segment<3>(0);
  const Vec3 lhat = x.segment<3>(3);
  const Vec4 q = x.segment<4>(6);
  const double q1 = q(0);
  const Vec3 qv = q.tail<3>();
  const Mat3 e = (q1 * q1 - qv.squaredNorm()) * Mat3::Identity() + 2.0 * qv * qv.transpose() +
                 2.0 * q1 * ref_skew(qv);
  Mat4 qm = Mat4::Identity() * q1;
  Mat4 blk;
  blk(0, 0) = q1;
  blk.block<1, 3>(0, 1) = -qv.transpose();
  blk.block<3, 1>(1, 0) = qv;
  blk.block<3, 3>(1, 1) = ref_skew(qv);
  qm += blk;

  Mat3 mm = Mat3::Zero();
  Mat3 sum_vy = Mat3::Zero();
  Vec3 rtilde = Vec3::Zero();
  for (std::size_t i = 0; i < v.size(); ++i) {
    mm += k[i] * v[i] * v[i].transpose();
    sum_vy += k[i] * v[i] * m.y[i].transpose();
    rtilde += k[i] * ref_skew(e.transpose() * v[i]) * m.y[i];
  }
  const Mat3 r = mm.partialPivLu().solve(sum_vy);
  const Mat3 jinv = j.inverse();
  const Vec3 delta_l = r.transpose() * lhat - j * (m.y0 - bhat);
  const Vec3 delta_r = g.alpha * jinv * delta_l + m.y0 - bhat - g.k_R * rtilde;
  ObserverVector dx;
  dx.segment<3>(0) = g.k_b * rtilde - g.alpha * g.k_b * g.k_a * j * delta_l;
  dx.segment<3>(3) = r * (tau - g.k_l * jinv * rtilde - (1 - g.alpha) * g.k_l * g.k_a * delta_l);
  Vec4 pure;
  pure << 0.0, delta_r;
  dx.segment<4>(6) = 0.5 * qm * pure;
  return dx;
}

}  // namespace rotobs::testing
