#include "cooplift/checks.hpp"

#include <cmath>
#include <random>

#include "cooplift/control_attitude.hpp"
#include "cooplift/dynamics.hpp"

namespace cooplift::checks {

namespace {

Vec3 uniform3(std::mt19937_64& rng, double a) {
  std::uniform_real_distribution<double> u(-a, a);
  return Vec3(u(rng), u(rng), u(rng));
}

}  // namespace

SystemState random_initial_state(const Scenario& base, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SystemState s = base.initial;
  s.v0 = uniform3(rng, 1.0);
  s.R0 = geom::exp_so3(uniform3(rng, 0.3)) * s.R0;
  s.Omega0 = uniform3(rng, 1.0);
  for (auto& q : s.quads) {
    q.q = (geom::exp_so3(uniform3(rng, 0.4)) * q.q).normalized();
    q.omega = geom::normal_projector(q.q) * uniform3(rng, 1.0);
    q.R = geom::exp_so3(uniform3(rng, 0.3)) * q.R;
    q.Omega = uniform3(rng, 1.0);
  }
  return s;
}

EnergyResult energy_conservation(const Scenario& base, double horizon, double dt,
                                 std::uint64_t seed) {
  Scenario sc = base;
  sc.closed_loop = false;
  sc.model = ModelMode::Full;
  sc.disturbance = DisturbanceModel::zero(sc.params.n(), sc.disturbance.bound_theta);
  sc.initial = random_initial_state(base, seed);
  sc.integrator = {dt, Scheme::RK4};
  sc.t_final = horizon;
  const RunLog log = run(sc);

  EnergyResult out;
  out.initial_energy = log.rows.front().energy;
  for (const auto& r : log.rows) {
    out.max_relative_drift =
        std::max(out.max_relative_drift,
                 std::abs(r.energy - out.initial_energy) / std::abs(out.initial_energy));
  }
  out.invariants = log.invariants;
  return out;
}

AllocationResult allocation_exactness(const SystemParams& params, int samples,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const MatX P = build_P(params);
  const payload_control::Allocator alloc(P);
  const Eigen::JacobiSVD<MatX> svd(P, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const std::size_t n = params.n();

  AllocationResult out;
  for (int k = 0; k < samples; ++k) {
    const Vec3 F = uniform3(rng, 30.0);
    const Vec3 M = uniform3(rng, 5.0);
    const Mat3 R0 = geom::exp_so3(uniform3(rng, 3.0));
    const auto mu = alloc.allocate(F, M, R0);

    Eigen::Matrix<double, 6, 1> rhs;
    rhs << R0.transpose() * F, M;
    VecX body(3 * n);
    for (std::size_t i = 0; i < n; ++i) {
      body.segment<3>(3 * static_cast<Eigen::Index>(i)) = R0.transpose() * mu[i];
    }
    const VecX oracle = svd.solve(rhs);
    out.max_residual = std::max(out.max_residual, (P * body - rhs).norm() / rhs.norm());
    out.max_norm_gap =
        std::max(out.max_norm_gap, std::abs(body.norm() - oracle.norm()) / oracle.norm());
    out.max_vector_gap =
        std::max(out.max_vector_gap, (body - oracle).norm() / oracle.norm());
  }
  return out;
}

double lyapunov_max_increase(const RunLog& log, double t_start) {
  const double V0 = log.rows.front().lyapunov;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < log.rows.size(); ++k) {
    if (log.rows[k].t < t_start - 1e-12) continue;
    worst = std::max(worst, log.rows[k + 1].lyapunov - log.rows[k].lyapunov);
  }
  return worst / V0;
}

AttitudeTrace attitude_experiment(const AttitudeGains& gains, const Mat3& J,
                                  const Mat3& R_init, const Mat3& R_c, double dt,
                                  double horizon) {
  SystemState state;
  state.quads.resize(1);
  state.quads[0].R = R_init;
  const Mat3 J_inv = J.inverse();
  const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));

  AttitudeTrace trace;
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * dt;
    trace.invariants.observe(state);
    const auto& quad = state.quads[0];
    const auto cmd = attitude_control::moment_command(
        quad.R, quad.Omega, J, R_c, Vec3::Zero(), Vec3::Zero(), gains);
    trace.t.push_back(t);
    trace.s_norm.push_back(cmd.s.norm());
    trace.e_R_norm.push_back(cmd.e_R.norm());
    trace.psi.push_back(cmd.psi);
    trace.W.push_back(0.5 * cmd.s.dot(J * cmd.s));
    if (k == steps) break;

    // The moment is re-evaluated at every stage, so the step integrates the
    // continuous closed loop rather than a zero-order hold.
    const DerivativeFn f = [&](double, const SystemState& s) {
      const auto& q = s.quads[0];
      const Vec3 M = attitude_control::moment_command(q.R, q.Omega, J, R_c, Vec3::Zero(),
                                                      Vec3::Zero(), gains)
                         .moment;
      StateDerivative d;
      d.quads.resize(1);
      d.quads[0].R_rate = q.Omega;
      d.quads[0].Omega_dot = J_inv * (M - q.Omega.cross(J * q.Omega));
      return d;
    };
    state = integrator::step(state, f, t, dt);
  }
  return trace;
}

SystemState open_loop_final(const Scenario& base, double dt, double horizon,
                            Scheme scheme) {
  Scenario sc = base;
  sc.closed_loop = false;
  sc.integrator = {dt, scheme};
  sc.t_final = horizon;
  return run(sc).final_state;
}

double state_distance(const SystemState& a, const SystemState& b) {
  double d2 = (a.x0 - b.x0).squaredNorm() + (a.v0 - b.v0).squaredNorm() +
              geom::log_so3(a.R0.transpose() * b.R0).squaredNorm() +
              (a.Omega0 - b.Omega0).squaredNorm();
  for (std::size_t i = 0; i < a.quads.size(); ++i) {
    const auto& p = a.quads[i];
    const auto& q = b.quads[i];
    d2 += (p.q - q.q).squaredNorm() + (p.omega - q.omega).squaredNorm() +
          geom::log_so3(p.R.transpose() * q.R).squaredNorm() +
          (p.Omega - q.Omega).squaredNorm();
  }
  return std::sqrt(d2);
}

}  // namespace cooplift::checks
