#pragma once

#include <Eigen/Dense>

#include <random>
#include <stdexcept>
#include <string>

namespace rotobs {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Rng = std::mt19937_64;

/// Tolerance on ‖RᵀR − I‖ and |det R − 1| accepted by RotationMatrix.
inline constexpr double kOrthogonalityTol = 1e-9;
/// Tolerance on |w² + vᵀv − 1| accepted by UnitQuaternion.
inline constexpr double kUnitTol = 1e-12;
/// Symmetry tolerance for InertiaMatrix.
inline constexpr double kSymmetryTol = 1e-12;
/// Skew-symmetry tolerance for unskew().
inline constexpr double kSkewTol = 1e-9;

class NotSkewSymmetric : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidRotation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidQuaternion : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidInertia : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Element of SO(3). Construction from a raw matrix checks orthogonality and
/// orientation; it never re-orthonormalizes silently (see nearest()).
class RotationMatrix {
 public:
  RotationMatrix() : m_(Mat3::Identity()) {}
  explicit RotationMatrix(const Mat3& m);

  static RotationMatrix identity() { return RotationMatrix(); }
  /// Closest rotation in the Frobenius sense (SVD projection).
  static RotationMatrix nearest(const Mat3& m);

  const Mat3& matrix() const { return m_; }
  RotationMatrix transpose() const { return RotationMatrix(m_.transpose(), Unchecked{}); }

  RotationMatrix operator*(const RotationMatrix& other) const {
    return RotationMatrix(m_ * other.m_, Unchecked{});
  }
  Vec3 operator*(const Vec3& v) const { return m_ * v; }

 private:
  struct Unchecked {};
  RotationMatrix(const Mat3& m, Unchecked) : m_(m) {}

  Mat3 m_;
};

/// Scalar-first Hamilton quaternion with unit norm.
class UnitQuaternion {
 public:
  UnitQuaternion() : w_(1.0), v_(Vec3::Zero()) {}
  UnitQuaternion(double w, const Vec3& v);
  /// Validates a (w, x, y, z) coefficient vector.
  explicit UnitQuaternion(const Vec4& wxyz) : UnitQuaternion(wxyz(0), wxyz.tail<3>()) {}

  static UnitQuaternion identity() { return UnitQuaternion(); }
  /// Projects an arbitrary nonzero 4-vector onto the unit sphere.
  static UnitQuaternion normalized(const Vec4& wxyz);

  double w() const { return w_; }
  const Vec3& v() const { return v_; }
  Vec4 coeffs() const { return Vec4(w_, v_.x(), v_.y(), v_.z()); }

  UnitQuaternion operator-() const { return UnitQuaternion(-w_, -v_, Unchecked{}); }
  UnitQuaternion conjugate() const { return UnitQuaternion(w_, -v_, Unchecked{}); }

 private:
  struct Unchecked {};
  UnitQuaternion(double w, const Vec3& v, Unchecked) : w_(w), v_(v) {}

  double w_;
  Vec3 v_;
};

/// Symmetric positive definite inertia matrix with cached inverse and
/// extreme eigenvalues.
class InertiaMatrix {
 public:
  explicit InertiaMatrix(const Mat3& j);

  static InertiaMatrix identity() { return InertiaMatrix(Mat3::Identity()); }

  const Mat3& matrix() const { return j_; }
  const Mat3& inverse() const { return j_inv_; }
  double min_eigenvalue() const { return eig_min_; }
  double max_eigenvalue() const { return eig_max_; }

 private:
  Mat3 j_;
  Mat3 j_inv_;
  double eig_min_;
  double eig_max_;
};

/// S(a) with S(a)b = a × b.
Mat3 skew(const Vec3& a);

/// Inverse of skew(). Throws NotSkewSymmetric if ‖m + mᵀ‖ exceeds kSkewTol.
Vec3 unskew(const Mat3& m);

/// E(q) = (w² − vᵀv)I + 2vvᵀ + 2wS(v).
RotationMatrix quat_to_rot(const UnitQuaternion& q);

/// Quaternion with nonnegative scalar part such that quat_to_rot() returns r.
UnitQuaternion rot_to_quat(const RotationMatrix& r);

/// Q(q) = I·w + [[w, −vᵀ], [v, S(v)]], so that q̇ = ½ Q(q) (0, ω).
Mat4 quat_kinematics_matrix(const UnitQuaternion& q);

/// E and Q evaluated on raw (w, x, y, z) coefficients that need not be unit,
/// as happens at intermediate Runge-Kutta stages.
Mat3 quat_to_matrix(const Vec4& wxyz);
Mat4 quat_kinematics_matrix(const Vec4& wxyz);

/// q̇ = ½ Q(q) (0, ω) for a body-frame rate ω.
Vec4 quat_derivative(const UnitQuaternion& q, const Vec3& omega);

/// d/ds E(q + s q̇) at s = 0. E is quadratic in q, so this is exact.
Mat3 quat_to_rot_derivative(const UnitQuaternion& q, const Vec4& q_dot);

/// Ψ(A, B) = ½ tr(AᵀB − I), in [−2, 0].
double psi_metric(const RotationMatrix& a, const RotationMatrix& b);

/// Exponential map so(3) → SO(3).
RotationMatrix exp_so3(const Vec3& phi);

/// Logarithm SO(3) → so(3) (principal branch, angle in [0, π]).
Vec3 log_so3(const RotationMatrix& r);

/// Inverse of the left Jacobian of SO(3), J_l(φ)⁻¹, mapping the spatial rate
/// of exp(S(φ)) to φ̇.
Mat3 left_jacobian_inverse(const Vec3& phi);

/// Draws a 4D standard Gaussian, normalizes it and embeds it with E.
UnitQuaternion sample_uniform_quaternion(Rng& rng);
RotationMatrix sample_uniform_rotation(Rng& rng);

/// J = 0.5 (J_A + I) for a symmetric PSD shape matrix J_A.
InertiaMatrix inertia_from_shape(const Mat3& j_a);

/// Random inertia whose shape matrix J_A has spectrum {0, λ, 1}, λ ~ U[0, 1],
/// with uniformly random principal axes. Eigenvalues of J lie in [0.5, 1].
InertiaMatrix sample_inertia(Rng& rng);

}  // namespace rotobs
