#include "cooplift/simulation.hpp"

#include <cmath>
#include <sstream>

#include "cooplift/dynamics.hpp"
#include "cooplift/error.hpp"
#include "cooplift/verification.hpp"

namespace cooplift {

void InvariantMaxima::observe(const SystemState& state) {
  auto orth = [](const Mat3& R) {
    return (R.transpose() * R - Mat3::Identity()).norm();
  };
  rotation = std::max(rotation, orth(state.R0));
  for (const auto& q : state.quads) {
    rotation = std::max(rotation, orth(q.R));
    unit = std::max(unit, std::abs(q.q.norm() - 1.0));
    tangent = std::max(tangent, std::abs(q.q.dot(q.omega)));
  }
}

void InvariantMaxima::merge(const InvariantMaxima& other) {
  rotation = std::max(rotation, other.rotation);
  unit = std::max(unit, other.unit);
  tangent = std::max(tangent, other.tangent);
}

namespace {

bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::ValidationError:
    case ErrorCode::RankDeficient:
    case ErrorCode::IoError:
      return false;
    default:
      return true;
  }
}

}  // namespace

RunLog run(const Scenario& input, const RunOptions& options) {
  Scenario sc = input;
  if (options.model) sc.model = *options.model;
  if (options.dt) sc.integrator.dt = *options.dt;
  if (options.t_final) sc.t_final = *options.t_final;
  sc.validate();

  const std::size_t n = sc.params.n();
  const double dt = sc.integrator.dt;
  const auto steps = static_cast<std::size_t>(std::llround(sc.t_final / dt));
  const bool full = sc.model == ModelMode::Full;
  const auto trajectory = sc.trajectory.build();

  PayloadController controller(sc.params, sc.payload_gains, trajectory,
                               sc.disturbance, dt);
  std::vector<AttitudeController> attitude;
  for (const auto& qp : sc.params.quads) {
    attitude.emplace_back(sc.attitude_gains, qp.inertia, dt);
  }
  EstimatorState est =
      EstimatorState::zero(n, sc.disturbance.n_theta(), sc.disturbance.bound_theta);
  est.h_x0 = sc.adaptive.h_x0;
  est.h_R0 = sc.adaptive.h_R0;
  est.h_xi = sc.adaptive.h_xi;

  RunLog log;
  log.scenario = sc.name;
  log.model = sc.model;
  log.n = n;
  log.dt = dt;
  log.bound_theta = sc.disturbance.bound_theta;
  log.rows.reserve(steps + 1);
  if (options.keep_records) log.records.reserve(steps + 1);

  SystemState state = sc.initial;
  std::size_t k = 0;
  try {
    for (k = 0;; ++k) {
      const double t = static_cast<double>(k) * dt;
      log.invariants.observe(state);

      ControlOutput control;
      QuadInputs inputs = full ? QuadInputs::zero_thrust(n) : QuadInputs::zero_force(n);
      std::vector<AttitudeCommand> commands;
      LogRow row;
      row.t = t;
      row.x0 = state.x0;
      row.psi_q.assign(n, 0.0);
      row.psi_i.assign(n, 0.0);
      row.tension.assign(n, 0.0);
      row.thrust.assign(n, 0.0);
      row.moment.assign(n, Vec3::Zero());

      if (sc.closed_loop) {
        control = controller.compute(t, state, est);
        for (std::size_t i = 0; i < n; ++i) {
          const auto& link = control.links[i];
          row.psi_q[i] = link.psi_q;
          row.tension[i] = link.mu.norm();
          if (full) {
            const auto& qs = state.quads[i];
            commands.push_back(attitude[i].compute(link.u, trajectory->heading(i, t),
                                                   qs.R, qs.Omega));
            const auto& cmd = commands.back();
            inputs.thrust[i] = cmd.thrust;
            inputs.moment[i] = cmd.moment.moment;
            row.psi_i[i] = cmd.moment.psi;
            row.thrust[i] = cmd.thrust;
            row.moment[i] = cmd.moment.moment;
            const Vec3 realized = -cmd.thrust * (qs.R * kE3);
            row.force_error = std::max(row.force_error, (realized - link.u).norm());
          } else {
            inputs.force[i] = link.u;
            row.thrust[i] = link.u.norm();
          }
        }
      } else {
        const auto ref = trajectory->payload(t);
        control.t = t;
        control.ref = ref;
        control.errors = payload_control::payload_errors(state, ref);
      }
      const PayloadReference& ref = control.ref;
      row.e_x0 = control.errors.e_x;
      row.psi0_trace = control.errors.psi_R;
      row.psi0_frob = 0.5 * (state.R0 - ref.R).squaredNorm();
      row.theta_x0_norm = est.theta_x0.norm();
      row.theta_R0_norm = est.theta_R0.norm();
      for (const auto& th : est.theta_xi) {
        row.theta_xi_max_norm = std::max(row.theta_xi_max_norm, th.norm());
      }
      row.energy = energy(state, sc.params).total();
      if (options.lyapunov && sc.closed_loop) {
        row.lyapunov = verification::lyapunov_value(
                           verification::tracking_errors(control), est,
                           sc.disturbance, sc.params, sc.payload_gains)
                           .total();
      }

      // Held controller outputs for the step below; `control` may be moved
      // into the record.
      QuadInputs commanded = QuadInputs::zero_force(n);
      if (sc.closed_loop) commanded.force = control.forces();
      const AdaptiveSignals signals = control.signals;

      if (options.keep_records) {
        StepRecord rec;
        rec.t = t;
        rec.state = state;
        rec.estimator = est;
        rec.attitude = commands;
        const auto d = eom(state, inputs, sc.disturbance, t, sc.params);
        rec.x0_ddot = d.v_dot;
        rec.Omega0_dot = d.Omega0_dot;
        for (std::size_t i = 0; i < n; ++i) {
          rec.applied_force.push_back(inputs.applied_force(i, state));
          rec.omega_dot.push_back(d.quads[i].omega_dot);
        }
        rec.control = std::move(control);
        log.records.push_back(std::move(rec));
      }
      log.rows.push_back(std::move(row));

      if (k == steps) break;

      const DerivativeFn f = [&](double tau, const SystemState& s) {
        return eom(s, inputs, sc.disturbance, tau, sc.params);
      };
      const SystemState next = integrator::step(state, f, t, sc.integrator);
      if (sc.closed_loop) {
        if (sc.adaptive.enabled) est = adaptive::step(est, signals, dt);
        // The controller sees the accelerations its commanded forces would
        // produce, so thrust-direction errors in the full model do not feed
        // back through a_i.
        const auto d = eom(next, commanded, sc.disturbance, t + dt, sc.params);
        controller.accept_accelerations(d.v_dot, d.Omega0_dot);
      }
      state = next;
    }
  } catch (const Error& e) {
    if (!is_numerical(e.code())) throw;
    std::ostringstream os;
    os << "step " << k << " (t = " << static_cast<double>(k) * dt << " s): " << e.what();
    throw Error(ErrorCode::NumericalFailure, os.str());
  }
  log.final_state = state;
  return log;
}

}  // namespace cooplift
