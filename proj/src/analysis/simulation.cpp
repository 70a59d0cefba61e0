#include "rotobs/analysis/simulation.hpp"

#include <cmath>

namespace rotobs {

namespace {

/// Observer steps per measurement interval.
int steps_per_measurement(const SimulationConfig& cfg) {
  return static_cast<int>(std::lround(cfg.noise.h_meas / cfg.integrator.h_obs));
}

}  // namespace

void SimulationConfig::validate() const {
  integrator.validate();
  noise.validate();
  gains.validate();
  switch (effective_sampling()) {
    case SamplingMode::Continuous:
      if (noise.enabled) throw InvalidConfig("continuous sampling requires noise to be off");
      if (integrator.truth_steps_per_observer_step() % 2 != 0) {
        throw InvalidConfig("continuous sampling requires an even h_obs/h_truth ratio");
      }
      break;
    case SamplingMode::ZeroOrderHold: {
      const double ratio = noise.h_meas / integrator.h_obs;
      if (ratio < 1.0 - 1e-12 || std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
        throw InvalidConfig("h_meas must be a positive integer multiple of h_obs");
      }
      break;
    }
    case SamplingMode::Auto:
      break;
  }
}

SamplingMode SimulationConfig::effective_sampling() const {
  if (sampling != SamplingMode::Auto) return sampling;
  return noise.enabled ? SamplingMode::ZeroOrderHold : SamplingMode::Continuous;
}

void simulate(const Scenario& sc, const SimulationConfig& cfg,
              const std::vector<ObserverVariant>& variants, Rng& rng, const SampleSink& sink) {
  cfg.validate();
  const TruthTrajectory truth =
      simulate_truth(sc.truth0, sc.inertia, cfg.torque, cfg.integrator);
  const int stride = cfg.integrator.truth_steps_per_observer_step();
  const int n_steps = cfg.integrator.observer_steps();
  const double h = cfg.integrator.h_obs;
  const bool continuous = cfg.effective_sampling() == SamplingMode::Continuous;
  const auto& j = sc.inertia;
  const bool use_truth = cfg.attitude_reference == AttitudeReference::True;

  auto input_at_truth_index = [&](std::size_t k, double tau_time) {
    const RigidBodyState& s = truth.states[k];
    return ObserverInput{measure_exact(s, sc.bias, sc.dirs, truth.time(k)),
                         torque_at(cfg.torque, tau_time), quat_to_rot(s.q).matrix(), use_truth};
  };

  // Held measurements, shared by every observer so that all variants see the
  // same noise realization.
  const int per_meas = continuous ? 1 : steps_per_measurement(cfg);
  std::vector<ObserverInput> held;
  if (!continuous) {
    const int n_meas = n_steps / per_meas + 1;
    held.reserve(static_cast<std::size_t>(n_meas));
    for (int m = 0; m < n_meas; ++m) {
      const auto k = static_cast<std::size_t>(m) * per_meas * stride;
      const RigidBodyState& s = truth.states[k];
      held.push_back(ObserverInput{measure(s, sc.bias, sc.dirs, cfg.noise, rng, truth.time(k)),
                                   Vec3::Zero(), quat_to_rot(s.q).matrix(), use_truth});
    }
  }

  const auto equilibria = equilibrium_rotations(sc.dirs);
  const LyapunovForm form_of[] = {LyapunovForm::AngularMomentum, LyapunovForm::Complementary,
                                  LyapunovForm::Fused, LyapunovForm::Fused};

  for (const ObserverVariant variant : variants) {
    ObserverState state{sc.b_hat0, sc.l_hat0, sc.q_hat0};
    const LyapunovForm form = form_of[variant_number(variant) - 1];

    auto current_input = [&](int n) {
      const auto k = static_cast<std::size_t>(n) * stride;
      if (continuous) return input_at_truth_index(k, truth.time(k));
      ObserverInput in = held[static_cast<std::size_t>(n / per_meas)];
      in.tau = torque_at(cfg.torque, truth.time(k));
      return in;
    };

    auto emit = [&](int n, const ObserverInput& in) {
      const auto k = static_cast<std::size_t>(n) * stride;
      SampleRow row;
      row.t = truth.time(k);
      row.truth = truth.states[k];
      row.bias = sc.bias;
      row.state = state;
      const ReportedEstimates rep = reported_estimates(variant, state, in.meas, j);
      row.omega_hat = rep.omega_hat;
      row.b_hat = rep.b_hat;
      row.error = reported_error_state(variant, row.truth, state, sc.bias, in.meas, j);
      row.psi = psi_metric(row.error.R_tilde, RotationMatrix::identity());
      row.psi_equilibria = psi_to_equilibria(row.error.R_tilde, equilibria);
      row.v1 = lyapunov_v1(form, error_state(row.truth, state, sc.bias, j), cfg.gains, sc.dirs);
      const InnovationTerms it = innovation_terms(variant, pack(state), in, j, sc.dirs);
      row.r_tilde_norm = it.r_tilde.norm();
      row.delta_L_norm = it.delta_L.norm();
      sink(variant, row);
    };

    for (int n = 0; n < n_steps; ++n) {
      const ObserverInput start = current_input(n);
      emit(n, start);
      const double t = truth.time(static_cast<std::size_t>(n) * stride);
      if (continuous) {
        const auto k = static_cast<std::size_t>(n) * stride;
        const ObserverInput mid = input_at_truth_index(k + stride / 2, t + 0.5 * h);
        const ObserverInput end = input_at_truth_index(k + stride, t + h);
        state = observer_step(variant, state, StageInputs{start, mid, end}, j, cfg.gains, sc.dirs,
                              h, t);
      } else {
        state = observer_step(variant, state, start, j, cfg.gains, sc.dirs, h, t);
      }
    }
    emit(n_steps, current_input(n_steps));
  }
}

std::vector<RunRecord> simulate_records(const Scenario& scenario, const SimulationConfig& cfg,
                                        const std::vector<ObserverVariant>& variants, Rng& rng) {
  std::vector<RunRecord> out;
  for (const ObserverVariant v : variants) out.push_back({v, {}});
  simulate(scenario, cfg, variants, rng, [&](ObserverVariant v, const SampleRow& row) {
    for (RunRecord& r : out) {
      if (r.variant == v) {
        r.rows.push_back(row);
        return;
      }
    }
  });
  return out;
}

}  // namespace rotobs
