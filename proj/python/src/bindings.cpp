#include "rotobs/analysis/linearization.hpp"
#include "rotobs/analysis/montecarlo.hpp"
#include "rotobs/analysis/simulation.hpp"
#include "rotobs/rng.hpp"
#include "rotobs/so3.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace rotobs;

namespace {

ObserverGains make_gains(double k_R, double k_l, double k_a, double k_b, double alpha) {
  ObserverGains g{k_R, k_l, k_a, k_b, alpha};
  g.validate();
  return g;
}

std::vector<ObserverVariant> make_variants(const std::vector<int>& observers) {
  std::vector<ObserverVariant> v;
  for (int n : observers) v.push_back(variant_from_number(n));
  return v;
}

SimulationConfig make_sim(double duration, bool noise, double alpha) {
  SimulationConfig cfg;
  cfg.integrator.duration = duration;
  cfg.noise.enabled = noise;
  cfg.gains.alpha = alpha;
  cfg.validate();
  return cfg;
}

/// Columns: t, psi, |omega_tilde|, |b_tilde|, v1, |r_tilde|, |delta_L|.
py::array_t<double> rows_to_array(const std::vector<SampleRow>& rows) {
  py::array_t<double> out({static_cast<py::ssize_t>(rows.size()), py::ssize_t{7}});
  auto a = out.mutable_unchecked<2>();
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const SampleRow& r = rows[k];
    const double vals[7] = {r.t,
                            r.psi,
                            r.error.omega_tilde.norm(),
                            r.error.b_tilde.norm(),
                            r.v1,
                            r.r_tilde_norm,
                            r.delta_L_norm};
    for (int c = 0; c < 7; ++c) a(static_cast<py::ssize_t>(k), c) = vals[c];
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Attitude observers with gyro-bias and angular-momentum fusion";

  py::register_exception<InvalidConfig>(m, "InvalidConfig", PyExc_ValueError);
  py::register_exception<InvalidRotation>(m, "InvalidRotation", PyExc_ValueError);
  py::register_exception<NonFiniteState>(m, "NonFiniteState", PyExc_ArithmeticError);

  m.def("skew", &skew, py::arg("a"), "S(a) with S(a) b = a x b.");
  m.def("unskew", &unskew, py::arg("m"));
  m.def(
      "exp_so3", [](const Vec3& phi) { return exp_so3(phi).matrix(); }, py::arg("phi"));
  m.def(
      "log_so3", [](const Mat3& r) { return log_so3(RotationMatrix(r)); }, py::arg("r"));
  m.def(
      "quat_to_rot", [](const Vec4& q) { return quat_to_rot(UnitQuaternion(q)).matrix(); },
      py::arg("q"), "Rotation matrix of a unit (w, x, y, z) quaternion.");
  m.def(
      "rot_to_quat", [](const Mat3& r) { return rot_to_quat(RotationMatrix(r)).coeffs(); },
      py::arg("r"));
  m.def(
      "psi", [](const Mat3& a, const Mat3& b) {
        return psi_metric(RotationMatrix(a), RotationMatrix(b));
      },
      py::arg("a"), py::arg("b"), "Psi(A, B) = 0.5 tr(A^T B - I).");

  m.def(
      "simulate",
      [](std::vector<int> observers, double duration, bool noise, double alpha,
         std::uint64_t seed) {
        const Scenario sc = paper_scenario(default_weights());
        const SimulationConfig cfg = make_sim(duration, noise, alpha);
        Rng rng = make_stream(seed, 0);
        std::map<int, py::array_t<double>> out;
        for (const RunRecord& r : simulate_records(sc, cfg, make_variants(observers), rng))
          out[variant_number(r.variant)] = rows_to_array(r.rows);
        return out;
      },
      py::arg("observers") = std::vector<int>{1, 2, 3, 4}, py::arg("duration") = 10.0,
      py::arg("noise") = false, py::arg("alpha") = 0.3, py::arg("seed") = 7,
      "Simulates the fixed example. Returns {observer: array} with columns "
      "t, psi, |omega_tilde|, |b_tilde|, V1, |r_tilde|, |delta_L|.");

  m.def(
      "monte_carlo",
      [](std::size_t runs, std::uint64_t seed, std::vector<int> observers, double duration,
         bool noise, unsigned threads) {
        MonteCarloConfig cfg;
        cfg.sim = make_sim(duration, noise, 0.3);
        cfg.variants = make_variants(observers);
        cfg.threads = threads;
        RmseReport r;
        {
          py::gil_scoped_release release;
          r = monte_carlo_rmse(runs, seed, cfg);
        }
        std::map<std::tuple<int, std::string, std::string>, double> cells;
        for (const RmseCell& c : r.cells)
          cells[{variant_number(c.variant), c.window, signal_name(c.signal)}] = c.rmse;
        return py::make_tuple(cells, r.failures.size());
      },
      py::arg("runs") = 100, py::arg("seed") = 7, py::arg("observers") = std::vector<int>{1, 2, 4},
      py::arg("duration") = 10.0, py::arg("noise") = true, py::arg("threads") = 0,
      "RMSE table: ({(observer, window, signal): rmse}, n_failed).");

  m.def(
      "linearize",
      [](double alpha, int observer) {
        const Scenario sc = paper_scenario(default_weights());
        ObserverGains g;
        g.alpha = alpha;
        g.validate();
        const OperatingPoint op{quat_to_rot(sc.truth0.q), sc.bias};
        const LinearizedModel lm =
            linearize_error_dynamics(op, g, sc.dirs, sc.inertia, variant_from_number(observer));
        return py::make_tuple(Eigen::MatrixXd(lm.A), Eigen::MatrixXd(lm.B));
      },
      py::arg("alpha") = 0.3, py::arg("observer") = 3,
      "(A, B) of the linearized fused-observer error dynamics at the fixed example.");

  m.def(
      "sigma",
      [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const std::vector<double>& omega) {
        const auto s = frequency_response_sigma(a, b, omega);
        Eigen::MatrixXd out(static_cast<Eigen::Index>(s.size()), s.empty() ? 0 : s[0].size());
        for (std::size_t i = 0; i < s.size(); ++i)
          out.row(static_cast<Eigen::Index>(i)) = s[i].transpose();
        return out;
      },
      py::arg("a"), py::arg("b"), py::arg("omega"),
      "Singular values (descending) of (i w I - A)^-1 B, one row per frequency.");
}
