#include "rotobs/analysis/linearization.hpp"

#include <algorithm>
#include <cmath>

namespace rotobs {

namespace {

Vec3 skew_part(const Mat3& m) {
  const Mat3 s = 0.5 * (m - m.transpose());
  return Vec3(s(2, 1), s(0, 2), s(1, 0));
}

}  // namespace

Vec9 error_field(const Vec9& x, const Vec12& delta, const OperatingPoint& op,
                 const ObserverGains& gains, const DirectionSet& dirs, const InertiaMatrix& j,
                 ObserverVariant variant) {
  if (variant != ObserverVariant::FusedTrueAttitude && variant != ObserverVariant::Fused) {
    throw std::invalid_argument("linearization supports the fused variants 3 and 4");
  }
  const Vec3 eps = x.segment<3>(0);
  const Vec3 w_tilde = x.segment<3>(3);
  const Vec3 b_tilde = x.segment<3>(6);
  const Mat3& r = op.r.matrix();

  // Stationary truth: ω = 0, τ = 0, so Ṙ = 0 and ω̇ = 0.
  const RotationMatrix r_hat = exp_so3(eps) * op.r;
  ObserverState s;
  s.q_hat = rot_to_quat(r_hat);
  s.b_hat = op.bias + b_tilde;
  s.l_hat = r_hat.matrix() * (j.matrix() * w_tilde);

  ObserverInput in;
  in.meas.y0 = op.bias + delta.segment<3>(0);
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const Vec3 d = i < 3 ? Vec3(delta.segment<3>(3 + 3 * static_cast<int>(i))) : Vec3::Zero();
    in.meas.y.push_back(r.transpose() * (Mat3::Identity() + skew(d)) * dirs.direction(i));
  }
  in.tau = Vec3::Zero();
  in.r_true = r;

  const ObserverVector dx = observer_field(variant, pack(s), in, j, gains, dirs);
  const Mat3 r_hat_dot = quat_to_rot_derivative(s.q_hat, dx.segment<4>(6));
  const Mat3 r_tilde = r_hat.matrix() * r.transpose();
  const Mat3 r_tilde_dot = r_hat_dot * r.transpose();

  Vec9 out;
  out.segment<3>(0) = left_jacobian_inverse(eps) * skew_part(r_tilde_dot * r_tilde.transpose());
  out.segment<3>(3) =
      j.inverse() * (r_hat_dot.transpose() * s.l_hat + r_hat.matrix().transpose() * dx.segment<3>(3));
  out.segment<3>(6) = dx.segment<3>(0);
  return out;
}

LinearizedModel linearize_error_dynamics(const OperatingPoint& op, const ObserverGains& gains,
                                         const DirectionSet& dirs, const InertiaMatrix& j,
                                         ObserverVariant variant, double step,
                                         DifferenceScheme scheme) {
  LinearizedModel m;
  m.op = op;
  m.gains = gains;
  m.variant = variant;
  const Vec9 x0 = Vec9::Zero();
  const Vec12 d0 = Vec12::Zero();
  const Vec9 f0 = error_field(x0, d0, op, gains, dirs, j, variant);

  auto column = [&](auto&& eval_at) -> Vec9 {
    if (scheme == DifferenceScheme::Central) {
      return (eval_at(step) - eval_at(-step)) / (2.0 * step);
    }
    return (eval_at(step) - f0) / step;
  };
  for (int c = 0; c < 9; ++c) {
    m.A.col(c) = column([&](double s) {
      Vec9 x = x0;
      x(c) = s;
      return error_field(x, d0, op, gains, dirs, j, variant);
    });
  }
  for (int c = 0; c < 12; ++c) {
    m.B.col(c) = column([&](double s) {
      Vec12 d = d0;
      d(c) = s;
      return error_field(x0, d, op, gains, dirs, j, variant);
    });
  }
  return m;
}

bool is_hurwitz(const Mat9& a) {
  const Eigen::EigenSolver<Mat9> es(a, false);
  return (es.eigenvalues().real().array() < 0.0).all();
}

std::vector<SpectrumPoint> spectrum_vs_alpha(const OperatingPoint& op, const ObserverGains& gains,
                                             const DirectionSet& dirs, const InertiaMatrix& j,
                                             const std::vector<double>& alpha_grid,
                                             ObserverVariant variant) {
  std::vector<SpectrumPoint> out;
  for (const double alpha : alpha_grid) {
    ObserverGains g = gains;
    g.alpha = alpha;
    g.validate();
    const LinearizedModel m = linearize_error_dynamics(op, g, dirs, j, variant);
    const Eigen::EigenSolver<Mat9> es(m.A, false);
    SpectrumPoint p{alpha, es.eigenvalues()};
    std::sort(p.eigenvalues.begin(), p.eigenvalues.end(),
              [](const std::complex<double>& a, const std::complex<double>& b) {
                return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
              });
    out.push_back(p);
  }
  return out;
}

std::vector<Eigen::VectorXd> frequency_response_sigma(const Eigen::MatrixXd& a,
                                                      const Eigen::MatrixXd& b,
                                                      const std::vector<double>& omega_grid) {
  using Cplx = std::complex<double>;
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXcd ac = a.cast<Cplx>();
  const Eigen::MatrixXcd bc = b.cast<Cplx>();
  std::vector<Eigen::VectorXd> out;
  out.reserve(omega_grid.size());
  for (const double w : omega_grid) {
    const Eigen::MatrixXcd lhs = Cplx(0.0, w) * Eigen::MatrixXcd::Identity(n, n) - ac;
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(lhs);
    if (!(lu.rcond() > 1e-13)) {
      throw SingularFrequency("iωI − A is singular at ω = " + std::to_string(w));
    }
    const Eigen::MatrixXcd g = lu.solve(bc);
    out.push_back(Eigen::JacobiSVD<Eigen::MatrixXcd>(g).singularValues());
  }
  return out;
}

std::vector<Eigen::VectorXd> frequency_response_sigma(const LinearizedModel& model, int channel,
                                                      const std::vector<double>& omega_grid) {
  if (channel < 0 || channel > 3) throw std::out_of_range("noise channel must be 0..3");
  return frequency_response_sigma(model.A, model.B.middleCols<3>(3 * channel), omega_grid);
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi >= lo) || n < 1) throw std::invalid_argument("invalid log grid");
  std::vector<double> out;
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int i = 0; i < n; ++i) {
    out.push_back(n == 1 ? lo : std::pow(10.0, a + (b - a) * i / (n - 1)));
  }
  return out;
}

}  // namespace rotobs
