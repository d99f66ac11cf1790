#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "cooplift/integrator.hpp"
#include "test_support.hpp"

using namespace cooplift;
using cooplift::testing::code_of;

namespace {

SystemState one_quad() {
  SystemState s;
  s.quads.assign(1, QuadState{});
  return s;
}

StateDerivative rigid_motion(const SystemState& s) {
  StateDerivative d;
  d.x_dot = s.v0;
  d.R0_rate = s.Omega0;
  d.quads.resize(s.quads.size());
  for (std::size_t i = 0; i < s.quads.size(); ++i) {
    d.quads[i].q_rate = s.quads[i].omega;
    d.quads[i].R_rate = s.quads[i].Omega;
  }
  return d;
}

// x0_ddot = -x0 with x0(0) = e1, v0(0) = 0; error at t = 1.
double oscillator_error(double dt, Scheme scheme) {
  SystemState s = one_quad();
  s.x0 = kE1;
  const DerivativeFn f = [](double, const SystemState& st) {
    StateDerivative d = rigid_motion(st);
    d.v_dot = -st.x0;
    return d;
  };
  const int steps = static_cast<int>(std::lround(1.0 / dt));
  for (int k = 0; k < steps; ++k) s = integrator::step(s, f, k * dt, dt, scheme);
  return (s.x0 - std::cos(1.0) * kE1).norm();
}

}  // namespace

TEST(Step, UniformMotionIsExact) {
  SystemState s = one_quad();
  s.v0 = Vec3(1.0, -2.0, 0.5);
  s.Omega0 = Vec3(0.3, 0.4, -1.1);
  s.quads[0].omega = Vec3(0.7, -0.2, 0.0);
  s.quads[0].Omega = Vec3(0.0, 2.0, 1.0);
  const DerivativeFn f = [](double, const SystemState& st) { return rigid_motion(st); };
  SystemState out = s;
  for (int k = 0; k < 100; ++k) out = integrator::step(out, f, 0.01 * k, 0.01);
  EXPECT_LT((out.x0 - s.v0).norm(), 1e-13);
  EXPECT_LT((out.R0 - geom::exp_so3(s.Omega0)).norm(), 1e-12);
  EXPECT_LT((out.quads[0].q - geom::exp_so3(s.quads[0].omega) * kE3).norm(), 1e-12);
  EXPECT_LT((out.quads[0].R - geom::exp_so3(s.quads[0].Omega)).norm(), 1e-12);
}

TEST(Step, Rk4IsFourthOrder) {
  const double ratio = oscillator_error(0.02, Scheme::RK4) / oscillator_error(0.01, Scheme::RK4);
  EXPECT_NEAR(ratio, 16.0, 0.5);
}

TEST(Step, EulerIsFirstOrder) {
  const double ratio =
      oscillator_error(0.002, Scheme::Euler) / oscillator_error(0.001, Scheme::Euler);
  EXPECT_NEAR(ratio, 2.0, 0.05);
}

TEST(Step, ConfigOverload) {
  SystemState s = one_quad();
  s.v0 = kE2;
  const DerivativeFn f = [](double, const SystemState& st) { return rigid_motion(st); };
  IntegratorConfig cfg;
  cfg.dt = 0.5;
  cfg.scheme = Scheme::Euler;
  EXPECT_LT((integrator::step(s, f, 0.0, cfg).x0 - 0.5 * kE2).norm(), 1e-15);
}

TEST(Step, NonFiniteStateRejected) {
  const DerivativeFn f = [](double, const SystemState& st) {
    StateDerivative d = rigid_motion(st);
    d.v_dot = Vec3::Constant(std::numeric_limits<double>::quiet_NaN());
    return d;
  };
  EXPECT_EQ(code_of([&] { integrator::step(one_quad(), f, 0.0, 1e-3); }),
            ErrorCode::NumericalFailure);
}

TEST(Step, DerivativeArityMismatch) {
  const DerivativeFn f = [](double, const SystemState&) { return StateDerivative{}; };
  EXPECT_EQ(code_of([&] { integrator::step(one_quad(), f, 0.0, 1e-3); }),
            ErrorCode::ArityMismatch);
}

TEST(Retract, RestoresConstraints) {
  SystemState s = one_quad();
  s.R0 = geom::rotation(kE1, 0.3) + 1e-4 * Mat3::Ones();
  s.quads[0].q = Vec3(0.1, 0.0, 1.05);
  s.quads[0].omega = Vec3(0.2, 0.3, 0.4);
  s.quads[0].R = Mat3::Identity() * 1.001;
  integrator::retract(s);
  EXPECT_TRUE(geom::is_rotation(s.R0, 1e-14));
  EXPECT_TRUE(geom::is_rotation(s.quads[0].R, 1e-14));
  EXPECT_NEAR(s.quads[0].q.norm(), 1.0, 1e-15);
  EXPECT_NEAR(s.quads[0].q.dot(s.quads[0].omega), 0.0, 1e-15);
}

TEST(IntegratorConfig, Validation) {
  EXPECT_NO_THROW(IntegratorConfig{}.validate());
  IntegratorConfig cfg;
  cfg.dt = 0.0;
  EXPECT_EQ(code_of([&] { cfg.validate(); }), ErrorCode::ValidationError);
  cfg.dt = std::numeric_limits<double>::infinity();
  EXPECT_EQ(code_of([&] { cfg.validate(); }), ErrorCode::ValidationError);
}
