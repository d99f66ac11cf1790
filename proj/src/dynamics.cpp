#include "cooplift/dynamics.hpp"

#include <sstream>

#include "cooplift/error.hpp"

namespace cooplift {

using geom::hat;

QuadInputs QuadInputs::zero_force(std::size_t n) {
  QuadInputs in;
  in.mode = InputMode::Force;
  in.force.assign(n, Vec3::Zero());
  return in;
}

QuadInputs QuadInputs::zero_thrust(std::size_t n) {
  QuadInputs in;
  in.mode = InputMode::ThrustMoment;
  in.thrust.assign(n, 0.0);
  in.moment.assign(n, Vec3::Zero());
  return in;
}

Vec3 QuadInputs::applied_force(std::size_t i, const SystemState& state) const {
  if (mode == InputMode::Force) return force[i];
  return -thrust[i] * (state.quads[i].R * kE3);
}

MassMatrix mass_matrix(const SystemState& state, const SystemParams& params) {
  MassMatrix mm;
  mm.M_q = params.payload_mass * Mat3::Identity();
  mm.C.setZero();
  mm.J_eff = params.payload_inertia;
  for (std::size_t i = 0; i < params.n(); ++i) {
    const auto& qp = params.quads[i];
    const Vec3& q = state.quads[i].q;
    const Mat3 qqT = q * q.transpose();
    const Mat3 rho_hat = hat(qp.attachment);
    mm.M_q += qp.mass * qqT;
    mm.C -= qp.mass * qqT * state.R0 * rho_hat;
    mm.J_eff -= qp.mass * rho_hat * state.R0.transpose() * qqT * state.R0 *
                rho_hat;
  }
  mm.full << mm.M_q, mm.C, mm.C.transpose(), mm.J_eff;
  const Eigen::SelfAdjointEigenSolver<Mat6> eig(mm.full, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12) {
    std::ostringstream os;
    os << "6x6 system eigenvalues in [" << lo << ", " << hi << "]";
    throw Error(ErrorCode::SingularMass, os.str());
  }
  return mm;
}

StateDerivative eom(const SystemState& state, const QuadInputs& inputs,
                    const Disturbances& dist, const SystemParams& params) {
  const std::size_t n = params.n();
  const Mat3& R0 = state.R0;
  const Mat3 W0_hat = hat(state.Omega0);
  const Mat3 W0_hat2 = W0_hat * W0_hat;
  const Mat3& J0 = params.payload_inertia;
  const double g = params.gravity;

  Mat3 M_q = params.payload_mass * Mat3::Identity();
  Mat3 C = Mat3::Zero();
  Mat3 J_eff = J0;
  Vec3 rhs_x = dist.force0;
  Vec3 rhs_R = dist.moment0 - state.Omega0.cross(J0 * state.Omega0);

  // Per-link normal force components, reused by the link equations.
  std::vector<Vec3> normal_force(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& qp = params.quads[i];
    const auto& qs = state.quads[i];
    const Vec3& q = qs.q;
    const Mat3 qqT = q * q.transpose();
    const Mat3 rho_hat = hat(qp.attachment);
    const Vec3 force = inputs.applied_force(i, state) + dist.force[i];
    const Vec3 force_par = qqT * force;
    normal_force[i] = force - force_par;

    M_q += qp.mass * qqT;
    C -= qp.mass * qqT * R0 * rho_hat;
    J_eff -= qp.mass * rho_hat * R0.transpose() * qqT * R0 * rho_hat;

    const Vec3 link_force = force_par -
                            qp.mass * qp.link_length * qs.omega.squaredNorm() * q -
                            qp.mass * qqT * R0 * W0_hat2 * qp.attachment;
    rhs_x += link_force;
    rhs_R += rho_hat * R0.transpose() * link_force;
  }

  Mat6 A;
  A << M_q, C, C.transpose(), J_eff;
  Vec6 b;
  b << rhs_x, rhs_R;
  const Eigen::PartialPivLU<Mat6> lu(A);
  if (!(lu.rcond() > 1e-12)) {
    std::ostringstream os;
    os << "reciprocal condition estimate " << lu.rcond();
    throw Error(ErrorCode::SingularMass, os.str());
  }
  const Vec6 sol = lu.solve(b);
  const Vec3 a0 = sol.head<3>();  // x0_ddot - g e3
  const Vec3 Omega0_dot = sol.tail<3>();

  StateDerivative d;
  d.x_dot = state.v0;
  d.v_dot = a0 + g * kE3;
  d.R0_rate = state.Omega0;
  d.Omega0_dot = Omega0_dot;
  d.quads.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& qp = params.quads[i];
    const auto& qs = state.quads[i];
    const Mat3 q_hat = hat(qs.q);
    const Vec3 accel = a0 - R0 * hat(qp.attachment) * Omega0_dot +
                       R0 * W0_hat2 * qp.attachment;
    auto& qd = d.quads[i];
    qd.q_rate = qs.omega;
    qd.omega_dot = q_hat * accel / qp.link_length -
                   q_hat * normal_force[i] / (qp.mass * qp.link_length);
    if (inputs.mode == InputMode::ThrustMoment) {
      qd.R_rate = qs.Omega;
      qd.Omega_dot = qp.inertia.ldlt().solve(
          inputs.moment[i] + dist.moment[i] - qs.Omega.cross(qp.inertia * qs.Omega));
    }
  }
  return d;
}

StateDerivative eom(const SystemState& state, const QuadInputs& inputs,
                    const DisturbanceModel& dist, double t,
                    const SystemParams& params) {
  return eom(state, inputs, eval_disturbances(dist, t, state), params);
}

std::vector<Vec3> quad_positions(const SystemState& state,
                                 const SystemParams& params) {
  std::vector<Vec3> out(params.n());
  for (std::size_t i = 0; i < params.n(); ++i) {
    const auto& qp = params.quads[i];
    out[i] = state.x0 + state.R0 * qp.attachment - qp.link_length * state.quads[i].q;
  }
  return out;
}

std::vector<Vec3> quad_velocities(const SystemState& state,
                                  const SystemParams& params) {
  std::vector<Vec3> out(params.n());
  for (std::size_t i = 0; i < params.n(); ++i) {
    const auto& qp = params.quads[i];
    const auto& qs = state.quads[i];
    out[i] = state.v0 + state.R0 * state.Omega0.cross(qp.attachment) -
             qp.link_length * qs.omega.cross(qs.q);
  }
  return out;
}

Energy energy(const SystemState& state, const SystemParams& params) {
  Energy e;
  const double g = params.gravity;
  e.kinetic = 0.5 * params.payload_mass * state.v0.squaredNorm() +
              0.5 * state.Omega0.dot(params.payload_inertia * state.Omega0);
  e.potential = -params.payload_mass * g * kE3.dot(state.x0);
  const auto pos = quad_positions(state, params);
  const auto vel = quad_velocities(state, params);
  for (std::size_t i = 0; i < params.n(); ++i) {
    const auto& qp = params.quads[i];
    const auto& qs = state.quads[i];
    e.kinetic += 0.5 * qp.mass * vel[i].squaredNorm() +
                 0.5 * qs.Omega.dot(qp.inertia * qs.Omega);
    e.potential -= qp.mass * g * kE3.dot(pos[i]);
  }
  return e;
}

double input_power(const SystemState& state, const QuadInputs& inputs,
                   const Disturbances& dist, const SystemParams& params) {
  double p = dist.force0.dot(state.v0) + dist.moment0.dot(state.Omega0);
  const auto vel = quad_velocities(state, params);
  for (std::size_t i = 0; i < params.n(); ++i) {
    p += (inputs.applied_force(i, state) + dist.force[i]).dot(vel[i]);
    if (inputs.mode == InputMode::ThrustMoment) {
      p += (inputs.moment[i] + dist.moment[i]).dot(state.quads[i].Omega);
    }
  }
  return p;
}

}  // namespace cooplift
