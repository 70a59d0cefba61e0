#include "rotobs/so3.hpp"

#include "rotobs/rng.hpp"

#include <cmath>

namespace rotobs {

RotationMatrix::RotationMatrix(const Mat3& m) : m_(m) {
  if (!m.allFinite()) {
    throw InvalidRotation("rotation matrix has non-finite entries");
  }
  const double orth = (m.transpose() * m - Mat3::Identity()).norm();
  const double det = m.determinant();
  if (orth > kOrthogonalityTol || std::abs(det - 1.0) > kOrthogonalityTol) {
    throw InvalidRotation("matrix is not in SO(3): |RᵀR − I| = " + std::to_string(orth) +
                          ", det = " + std::to_string(det));
  }
}

RotationMatrix RotationMatrix::nearest(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 u = svd.matrixU();
  const Mat3 v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) {
    u.col(2) *= -1.0;
  }
  return RotationMatrix(u * v.transpose(), Unchecked{});
}

UnitQuaternion::UnitQuaternion(double w, const Vec3& v) : w_(w), v_(v) {
  const double n2 = w * w + v.squaredNorm();
  if (!std::isfinite(n2) || std::abs(n2 - 1.0) > kUnitTol) {
    throw InvalidQuaternion("quaternion is not unit: |q|² = " + std::to_string(n2));
  }
}

UnitQuaternion UnitQuaternion::normalized(const Vec4& wxyz) {
  const double n = wxyz.norm();
  if (!std::isfinite(n) || n < 1e-12) {
    throw InvalidQuaternion("cannot normalize a zero or non-finite quaternion");
  }
  const Vec4 u = wxyz / n;
  return UnitQuaternion(u(0), u.tail<3>(), Unchecked{});
}

InertiaMatrix::InertiaMatrix(const Mat3& j) : j_(j) {
  if (!j.allFinite()) {
    throw InvalidInertia("inertia has non-finite entries");
  }
  if ((j - j.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol) {
    throw InvalidInertia("inertia is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat3> es(j);
  eig_min_ = es.eigenvalues()(0);
  eig_max_ = es.eigenvalues()(2);
  if (!(eig_min_ > 0.0)) {
    throw InvalidInertia("inertia is not positive definite: min eigenvalue " +
                         std::to_string(eig_min_));
  }
  j_inv_ = j.inverse();
}

Mat3 skew(const Vec3& a) {
  Mat3 s;
  s << 0.0, -a.z(), a.y(),
       a.z(), 0.0, -a.x(),
       -a.y(), a.x(), 0.0;
  return s;
}

Vec3 unskew(const Mat3& m) {
  const double residual = (m + m.transpose()).cwiseAbs().maxCoeff();
  if (!(residual <= kSkewTol)) {
    throw NotSkewSymmetric("matrix is not skew-symmetric: residual " + std::to_string(residual));
  }
  return Vec3(m(2, 1), m(0, 2), m(1, 0));
}

Mat3 quat_to_matrix(const Vec4& wxyz) {
  const double w = wxyz(0);
  const Vec3 v = wxyz.tail<3>();
  return (w * w - v.squaredNorm()) * Mat3::Identity() + 2.0 * v * v.transpose() +
         2.0 * w * skew(v);
}

RotationMatrix quat_to_rot(const UnitQuaternion& q) {
  return RotationMatrix(quat_to_matrix(q.coeffs()));
}

UnitQuaternion rot_to_quat(const RotationMatrix& r) {
  Eigen::Quaterniond e(r.matrix());
  Vec4 c(e.w(), e.x(), e.y(), e.z());
  if (c(0) < 0.0) c = -c;
  return UnitQuaternion::normalized(c);
}

Mat4 quat_kinematics_matrix(const Vec4& wxyz) {
  const Vec3 v = wxyz.tail<3>();
  Mat4 block;
  block(0, 0) = wxyz(0);
  block.block<1, 3>(0, 1) = -v.transpose();
  block.block<3, 1>(1, 0) = v;
  block.block<3, 3>(1, 1) = skew(v);
  return Mat4::Identity() * wxyz(0) + block;
}

Mat4 quat_kinematics_matrix(const UnitQuaternion& q) {
  return quat_kinematics_matrix(q.coeffs());
}

Vec4 quat_derivative(const UnitQuaternion& q, const Vec3& omega) {
  Vec4 pure;
  pure << 0.0, omega;
  return 0.5 * quat_kinematics_matrix(q) * pure;
}

Mat3 quat_to_rot_derivative(const UnitQuaternion& q, const Vec4& q_dot) {
  const double w = q.w();
  const Vec3& v = q.v();
  const double w_dot = q_dot(0);
  const Vec3 v_dot = q_dot.tail<3>();
  return (2.0 * w * w_dot - 2.0 * v.dot(v_dot)) * Mat3::Identity() +
         2.0 * (v_dot * v.transpose() + v * v_dot.transpose()) + 2.0 * w_dot * skew(v) +
         2.0 * w * skew(v_dot);
}

double psi_metric(const RotationMatrix& a, const RotationMatrix& b) {
  return 0.5 * ((a.matrix().transpose() * b.matrix()).trace() - 3.0);
}

RotationMatrix exp_so3(const Vec3& phi) {
  const double theta = phi.norm();
  if (theta < 1e-300) return RotationMatrix::identity();
  return RotationMatrix(Eigen::AngleAxisd(theta, phi / theta).toRotationMatrix());
}

Vec3 log_so3(const RotationMatrix& r) {
  const Eigen::AngleAxisd aa(r.matrix());
  return aa.angle() * aa.axis();
}

Mat3 left_jacobian_inverse(const Vec3& phi) {
  const double theta = phi.norm();
  const Mat3 s = skew(phi);
  double c;
  if (theta < 1e-4) {
    // series of 1/θ² − (1 + cos θ)/(2θ sin θ)
    c = 1.0 / 12.0 + theta * theta / 720.0;
  } else {
    c = 1.0 / (theta * theta) - (1.0 + std::cos(theta)) / (2.0 * theta * std::sin(theta));
  }
  return Mat3::Identity() - 0.5 * s + c * s * s;
}

UnitQuaternion sample_uniform_quaternion(Rng& rng) {
  for (;;) {
    Vec4 g;
    for (int i = 0; i < 4; ++i) g(i) = standard_normal(rng);
    if (g.norm() >= 1e-9) return UnitQuaternion::normalized(g);
  }
}

RotationMatrix sample_uniform_rotation(Rng& rng) {
  return quat_to_rot(sample_uniform_quaternion(rng));
}

InertiaMatrix inertia_from_shape(const Mat3& j_a) {
  const Mat3 sym = 0.5 * (j_a + j_a.transpose());
  return InertiaMatrix(0.5 * (sym + Mat3::Identity()));
}

InertiaMatrix sample_inertia(Rng& rng) {
  const Mat3 u = sample_uniform_rotation(rng).matrix();
  const double lambda = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const Mat3 j_a = u * Vec3(0.0, lambda, 1.0).asDiagonal() * u.transpose();
  return inertia_from_shape(j_a);
}

}  // namespace rotobs
