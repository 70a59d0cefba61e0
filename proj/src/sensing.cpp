#include "rotobs/sensing.hpp"

#include "rotobs/rng.hpp"

#include <cmath>
#include <string>

namespace rotobs {

DirectionSet::DirectionSet(std::vector<Vec3> directions, std::vector<double> weights)
    : v_(std::move(directions)), k_(std::move(weights)) {
  if (v_.size() < 3) throw DegenerateDirections("at least three directions are required");
  if (v_.size() != k_.size()) {
    throw DegenerateDirections("direction and weight counts differ");
  }
  m_.setZero();
  for (std::size_t i = 0; i < v_.size(); ++i) {
    if (!(k_[i] > 0.0) || !std::isfinite(k_[i])) {
      throw DegenerateDirections("weight k" + std::to_string(i + 1) + " must be positive");
    }
    if (!v_[i].allFinite()) throw DegenerateDirections("direction is not finite");
    m_ += k_[i] * v_[i] * v_[i].transpose();
  }
  Eigen::SelfAdjointEigenSolver<Mat3> es(m_);
  lambda_ = es.eigenvalues();
  const double gap = std::min(lambda_(1) - lambda_(0), lambda_(2) - lambda_(1));
  if (!(gap > kSpectrumGapTol) || !(lambda_(0) > 0.0)) {
    throw NonDistinctSpectrum("M must have three distinct positive eigenvalues (min gap " +
                              std::to_string(gap) + ")");
  }
  Mat3 u = es.eigenvectors();
  if (u.determinant() < 0.0) u.col(2) *= -1.0;
  u_ = RotationMatrix::nearest(u);
  m_inv_ = m_.inverse();
}

DirectionSet make_direction_set(const Vec3& v1, const Vec3& v2, std::span<const double> weights) {
  if (weights.size() != 3) throw DegenerateDirections("three weights are required");
  const double n1 = v1.norm();
  const double n2 = v2.norm();
  if (!(n1 > 1e-12) || !(n2 > 1e-12)) throw DegenerateDirections("direction has zero length");
  if (std::abs(v1.dot(v2)) / (n1 * n2) >= 1.0 - 1e-9) {
    throw DegenerateDirections("v1 and v2 are parallel");
  }
  return DirectionSet({v1, v2, v1.cross(v2)}, {weights.begin(), weights.end()});
}

DirectionPair sample_direction_pair(Rng& rng) {
  const Vec3 v1(0.0, 0.0, -1.0);
  for (;;) {
    Vec3 v2 = gaussian3(rng);
    v2.z() = -0.1;
    // Near-zero horizontal part makes v2 nearly parallel to v1.
    if (v2.head<2>().norm() < 1e-6) continue;
    v2 /= v2.lpNorm<1>();
    return {v1, v2};
  }
}

void NoiseConfig::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidConfig("noise sigma must be >= 0");
  if (!(h_meas > 0.0)) throw InvalidConfig("h_meas must be positive");
}

MeasurementSet measure_exact(const RigidBodyState& state, const Vec3& bias,
                             const DirectionSet& dirs, double t) {
  const Mat3 rt = quat_to_rot(state.q).matrix().transpose();
  MeasurementSet m;
  m.t = t;
  m.y0 = state.omega + bias;
  m.y.reserve(dirs.size());
  for (const Vec3& v : dirs.directions()) m.y.push_back(rt * v);
  return m;
}

MeasurementSet measure(const RigidBodyState& state, const Vec3& bias, const DirectionSet& dirs,
                       const NoiseConfig& noise, Rng& rng, double t) {
  MeasurementSet m = measure_exact(state, bias, dirs, t);
  if (!noise.enabled) return m;
  m.y0 += gaussian3(rng, noise.sigma);
  for (std::size_t i = 0; i < m.y.size(); ++i) {
    const Vec3 noisy = m.y[i] + gaussian3(rng, noise.sigma);
    const double n = noisy.norm();
    if (!(n >= 1e-9)) throw DegenerateMeasurement("noisy direction measurement has zero length");
    m.y[i] = noisy * (dirs.direction(i).norm() / n);
  }
  return m;
}

std::vector<double> default_weights() { return {1.1, 1.2, 1.3}; }

Scenario paper_scenario(std::span<const double> weights) {
  Mat3 r0;
  r0 << 0.18, 0.97, -0.15,
        0.08, 0.14, 0.99,
        0.98, -0.19, -0.06;
  Mat3 r_hat0;
  r_hat0 << 0.35, 0.06, 0.94,
            0.84, 0.42, -0.34,
            -0.41, 0.91, 0.09;
  Mat3 j;
  j << 0.91, 0.03, 0.14,
       0.03, 0.73, 0.15,
       0.14, 0.15, 0.64;
  const Vec3 v1 = Vec3(0.0, 0.0, -1.0);
  const Vec3 v2 = Vec3(-0.87, -0.50, -0.05).normalized();

  return Scenario{
      .truth0 = {rot_to_quat(RotationMatrix::nearest(r0)), Vec3(-0.11, 0.02, -0.06)},
      .bias = Vec3(-0.12, -2.54, 0.28),
      .q_hat0 = rot_to_quat(RotationMatrix::nearest(r_hat0)),
      .b_hat0 = Vec3(-0.83, 0.54, 0.11),
      .l_hat0 = Vec3(-1.12, 0.05, -1.24),
      .inertia = InertiaMatrix(j),
      .dirs = make_direction_set(v1, v2, weights),
  };
}

Scenario sample_scenario(Rng& rng, std::span<const double> weights) {
  const UnitQuaternion q0 = sample_uniform_quaternion(rng);
  const Vec3 bias = gaussian3(rng);
  const Vec3 omega0 = gaussian3(rng, std::sqrt(0.1));
  const UnitQuaternion q_hat0 = sample_uniform_quaternion(rng);
  const Vec3 b_hat0 = gaussian3(rng);
  const Vec3 l_hat0 = gaussian3(rng);
  const InertiaMatrix j = sample_inertia(rng);
  for (;;) {
    const DirectionPair pair = sample_direction_pair(rng);
    try {
      return Scenario{
          .truth0 = {q0, omega0},
          .bias = bias,
          .q_hat0 = q_hat0,
          .b_hat0 = b_hat0,
          .l_hat0 = l_hat0,
          .inertia = j,
          .dirs = make_direction_set(pair.v1, pair.v2, weights),
      };
    } catch (const NonDistinctSpectrum&) {
      continue;
    }
  }
}

}  // namespace rotobs
