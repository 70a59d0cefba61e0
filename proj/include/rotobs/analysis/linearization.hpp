#pragma once

#include "rotobs/observers.hpp"
#include "rotobs/sensing.hpp"

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <vector>

namespace rotobs {

using Vec9 = Eigen::Matrix<double, 9, 1>;
using Vec12 = Eigen::Matrix<double, 12, 1>;
using Mat9 = Eigen::Matrix<double, 9, 9>;
using Mat9x12 = Eigen::Matrix<double, 9, 12>;

/// Stationary truth about which the error dynamics are linearized: attitude
/// R, zero rate, zero torque, constant bias b.
struct OperatingPoint {
  RotationMatrix r;
  Vec3 bias = Vec3::Zero();
};

/// ẋ̃ = A x̃ + B δ with x̃ = (ε̃, ω̃, b̃), R̃ = exp(S(ε̃)), and
/// δ = (δ₀, δ₁, δ₂, δ₃): y₀ = ω + b + δ₀, yᵢ = Rᵀ(I + S(δᵢ))vᵢ.
struct LinearizedModel {
  Mat9 A = Mat9::Zero();
  Mat9x12 B = Mat9x12::Zero();
  OperatingPoint op;
  ObserverGains gains;
  ObserverVariant variant = ObserverVariant::FusedTrueAttitude;
};

enum class DifferenceScheme { Central, Forward };

/// Exact error-state derivative of the chosen fused variant (3 or 4) at
/// perturbation x̃ and noise δ about the operating point.
Vec9 error_field(const Vec9& x, const Vec12& delta, const OperatingPoint& op,
                 const ObserverGains& gains, const DirectionSet& dirs, const InertiaMatrix& j,
                 ObserverVariant variant = ObserverVariant::FusedTrueAttitude);

/// Jacobians of error_field() at x̃ = 0, δ = 0 by finite differences.
LinearizedModel linearize_error_dynamics(
    const OperatingPoint& op, const ObserverGains& gains, const DirectionSet& dirs,
    const InertiaMatrix& j, ObserverVariant variant = ObserverVariant::FusedTrueAttitude,
    double step = 1e-6, DifferenceScheme scheme = DifferenceScheme::Central);

bool is_hurwitz(const Mat9& a);

struct SpectrumPoint {
  double alpha = 0.0;
  Eigen::Matrix<std::complex<double>, 9, 1> eigenvalues;
};

/// Eigenvalues of A for each α (other gains fixed). Eigenvalues are sorted by
/// real part, then imaginary part.
std::vector<SpectrumPoint> spectrum_vs_alpha(const OperatingPoint& op, const ObserverGains& gains,
                                             const DirectionSet& dirs, const InertiaMatrix& j,
                                             const std::vector<double>& alpha_grid,
                                             ObserverVariant variant =
                                                 ObserverVariant::FusedTrueAttitude);

class SingularFrequency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Singular values (descending) of G(iω) = (iωI − A)⁻¹B at each ω.
/// Throws SingularFrequency if iωI − A is numerically singular.
std::vector<Eigen::VectorXd> frequency_response_sigma(const Eigen::MatrixXd& a,
                                                      const Eigen::MatrixXd& b,
                                                      const std::vector<double>& omega_grid);

/// Noise channel: 0 for δ₀ (gyro), 1..3 for δᵢ (directions).
std::vector<Eigen::VectorXd> frequency_response_sigma(const LinearizedModel& model, int channel,
                                                      const std::vector<double>& omega_grid);

/// n points logarithmically spaced on [lo, hi].
std::vector<double> log_grid(double lo, double hi, int n);

}  // namespace rotobs
