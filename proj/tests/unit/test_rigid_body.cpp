#include "rotobs/rigid_body.hpp"
#include "rotobs/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace rotobs;

namespace {

InertiaMatrix test_inertia() {
  Mat3 j;
  j << 0.9, 0.05, 0.02, 0.05, 0.7, -0.03, 0.02, -0.03, 0.6;
  return InertiaMatrix(j);
}

}  // namespace

TEST(Torque, PaperSinusoid) {
  const TorqueProfile p = TorqueProfile::sinusoid();
  const Vec3 t = torque_at(p, 0.7);
  EXPECT_DOUBLE_EQ(t.x(), std::sin(1.7));
  EXPECT_DOUBLE_EQ(t.y(), std::sin(3.4));
  EXPECT_DOUBLE_EQ(t.z(), std::sin(2.1 + 3.0));
  EXPECT_EQ(torque_at(TorqueProfile::zero(), 1.0), Vec3::Zero());
  EXPECT_EQ(torque_at(TorqueProfile::constant(Vec3(1, 2, 3)), 5.0), Vec3(1, 2, 3));
}

TEST(IntegratorConfig, Validation) {
  IntegratorConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.truth_steps_per_observer_step(), 10);
  EXPECT_EQ(c.observer_steps(), 10000);
  c.h_truth = 3e-4;
  EXPECT_THROW(c.validate(), InvalidConfig);
  c = IntegratorConfig{};
  c.h_truth = 2e-3;
  EXPECT_THROW(c.validate(), InvalidConfig);
  c = IntegratorConfig{};
  c.duration = 0.0;
  EXPECT_THROW(c.validate(), InvalidConfig);
}

TEST(RigidBody, TorqueFreeInvariants) {
  // Without torque the inertial angular momentum RJω and the kinetic energy
  // are conserved.
  const InertiaMatrix j = test_inertia();
  Rng rng = make_stream(11, 0);
  RigidBodyState s{sample_uniform_quaternion(rng), Vec3(0.4, -0.8, 1.1)};
  const Vec3 l0 = quat_to_rot(s.q).matrix() * j.matrix() * s.omega;
  const double e0 = 0.5 * s.omega.dot(j.matrix() * s.omega);
  for (int k = 0; k < 10000; ++k) s = rk4_step(s, j, TorqueProfile::zero(), k * 1e-3, 1e-3);
  const Vec3 l1 = quat_to_rot(s.q).matrix() * j.matrix() * s.omega;
  const double e1 = 0.5 * s.omega.dot(j.matrix() * s.omega);
  EXPECT_LT((l1 - l0).norm(), 1e-9);
  EXPECT_LT(std::abs(e1 - e0), 1e-9);
  EXPECT_NEAR(s.q.coeffs().norm(), 1.0, 1e-15);
}

TEST(RigidBody, FourthOrderConvergence) {
  const InertiaMatrix j = test_inertia();
  const RigidBodyState s0{UnitQuaternion::identity(), Vec3(0.3, 0.2, -0.5)};
  auto run = [&](double h) {
    IntegratorConfig c;
    c.h_truth = h;
    c.h_obs = h;
    c.duration = 1.0;
    return simulate_truth(s0, j, TorqueProfile::sinusoid(), c).states.back();
  };
  const RigidBodyState ref = run(1e-4);
  const double e1 = (run(4e-2).omega - ref.omega).norm();
  const double e2 = (run(2e-2).omega - ref.omega).norm();
  EXPECT_GT(e1 / e2, 12.0);
  EXPECT_LT(e1 / e2, 20.0);
}

TEST(RigidBody, TrajectoryLength) {
  IntegratorConfig c;
  c.duration = 0.01;
  const TruthTrajectory tr =
      simulate_truth(RigidBodyState{}, test_inertia(), TorqueProfile::sinusoid(), c);
  EXPECT_EQ(tr.states.size(), 101u);
  EXPECT_NEAR(tr.time(100), 0.01, 1e-15);
}

TEST(RigidBody, NonFiniteDetected) {
  RigidBodyState s{UnitQuaternion::identity(), Vec3(NAN, 0.0, 0.0)};
  EXPECT_THROW(rk4_step(s, test_inertia(), TorqueProfile::zero(), 0.0, 1e-3), NonFiniteState);
}
