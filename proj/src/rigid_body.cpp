#include "rotobs/rigid_body.hpp"

#include <cmath>

namespace rotobs {

TorqueProfile TorqueProfile::constant(const Vec3& tau) {
  if (!tau.allFinite()) throw InvalidConfig("constant torque must be finite");
  return TorqueProfile(Kind::Constant, tau);
}

Vec3 torque_at(const TorqueProfile& profile, double t) {
  switch (profile.kind()) {
    case TorqueProfile::Kind::SinusoidPaper:
      return Vec3(std::sin(t + 1.0), std::sin(2.0 * t + 2.0), std::sin(3.0 * t + 3.0));
    case TorqueProfile::Kind::Zero:
      return Vec3::Zero();
    case TorqueProfile::Kind::Constant:
      return profile.constant_value();
  }
  return Vec3::Zero();
}

void IntegratorConfig::validate() const {
  if (!(h_truth > 0.0) || !(h_obs > 0.0) || h_truth > h_obs * (1.0 + 1e-12)) {
    throw InvalidConfig("integrator requires 0 < h_truth <= h_obs");
  }
  const double ratio = h_obs / h_truth;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
    throw InvalidConfig("h_obs must be an integer multiple of h_truth");
  }
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw InvalidConfig("duration must be positive");
  }
}

int IntegratorConfig::truth_steps_per_observer_step() const {
  return static_cast<int>(std::lround(h_obs / h_truth));
}

int IntegratorConfig::observer_steps() const {
  return static_cast<int>(std::lround(duration / h_obs));
}

RigidBodyDerivative dynamics_derivative(const RigidBodyState& state, const InertiaMatrix& j,
                                        const Vec3& tau) {
  const Vec3& w = state.omega;
  const Vec3 jw = j.matrix() * w;
  return {quat_derivative(state.q, w), j.inverse() * (jw.cross(w) + tau)};
}

TruthVector pack(const RigidBodyState& s) {
  TruthVector x;
  x << s.q.coeffs(), s.omega;
  return x;
}

RigidBodyState unpack_projected(const TruthVector& x) {
  return {UnitQuaternion::normalized(x.head<4>()), x.tail<3>()};
}

RigidBodyState rk4_step(const RigidBodyState& state, const InertiaMatrix& j,
                        const TorqueProfile& profile, double t, double h) {
  auto field = [&](double s, const TruthVector& x) {
    // Substages see the unnormalized intermediate quaternion.
    const Vec3 w = x.tail<3>();
    Vec4 pure;
    pure << 0.0, w;
    const Vec3 jw = j.matrix() * w;
    TruthVector dx;
    dx << 0.5 * quat_kinematics_matrix(Vec4(x.head<4>())) * pure,
        j.inverse() * (jw.cross(w) + torque_at(profile, s));
    return dx;
  };
  const TruthVector next = rk4_step<7>(field, pack(state), t, h);
  if (!next.allFinite()) {
    throw NonFiniteState("rigid-body integration produced a non-finite state", t + h);
  }
  return unpack_projected(next);
}

TruthTrajectory simulate_truth(const RigidBodyState& init, const InertiaMatrix& j,
                               const TorqueProfile& profile, const IntegratorConfig& cfg) {
  cfg.validate();
  const auto steps = static_cast<std::size_t>(cfg.observer_steps()) *
                     static_cast<std::size_t>(cfg.truth_steps_per_observer_step());
  TruthTrajectory traj;
  traj.h = cfg.h_obs / cfg.truth_steps_per_observer_step();
  traj.states.reserve(steps + 1);
  traj.states.push_back(init);
  for (std::size_t k = 0; k < steps; ++k) {
    traj.states.push_back(rk4_step(traj.states.back(), j, profile, traj.time(k), traj.h));
  }
  return traj;
}

}  // namespace rotobs
