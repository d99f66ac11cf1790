#include "cooplift/control_payload.hpp"

#include <sstream>

#include "cooplift/error.hpp"

namespace cooplift {

using geom::hat;

void PayloadGains::validate() const {
  for (double k : {k_x, k_v, k_R, k_Omega, k_q, k_omega, c_x, c_R, c_q,
                   setpoint_bandwidth}) {
    if (!(k > 0.0)) {
      throw Error(ErrorCode::ValidationError, "gains: payload gains must be > 0");
    }
  }
}

std::vector<Vec3> ControlOutput::forces() const {
  std::vector<Vec3> out;
  out.reserve(links.size());
  for (const auto& link : links) out.push_back(link.u);
  return out;
}

namespace payload_control {

PayloadErrors payload_errors(const SystemState& state, const PayloadReference& ref) {
  PayloadErrors e;
  e.e_x = state.x0 - ref.x;
  e.e_v = state.v0 - ref.v;
  const auto att = geom::attitude_errors(state.R0, ref.R, state.Omega0, ref.Omega);
  e.e_R = att.e_R;
  e.e_Omega = att.e_Omega;
  e.psi_R = att.psi;
  return e;
}

adaptive::RegressorValues regressor_values(const DisturbanceModel& model,
                                           double t, const SystemState& state) {
  adaptive::RegressorValues phi;
  phi.phi_x0 = model.phi_x0.matrix(t, state);
  phi.phi_R0 = model.phi_R0.matrix(t, state);
  const MatX phi_xi = model.phi_xi.matrix(t, state);
  phi.phi_xi.assign(state.quads.size(), phi_xi);
  return phi;
}

Wrench desired_wrench(const PayloadErrors& errors, const PayloadReference& ref,
                      const EstimatorState& est, const SystemState& state,
                      const SystemParams& params, const PayloadGains& gains,
                      const adaptive::RegressorValues& phi) {
  const double m0 = params.payload_mass;
  const Mat3& J0 = params.payload_inertia;
  const Mat3& R0 = state.R0;

  Wrench w;
  w.force = m0 * (-gains.k_x * errors.e_x - gains.k_v * errors.e_v + ref.a -
                  params.gravity * kE3) -
            phi.phi_x0 * est.theta_x0;

  const Mat3 RtRd = R0.transpose() * ref.R;
  const Vec3 Omega_d_body = RtRd * ref.Omega;
  w.moment = -gains.k_R * errors.e_R - gains.k_Omega * errors.e_Omega +
             Omega_d_body.cross(J0 * Omega_d_body) + J0 * RtRd * ref.Omega_dot -
             phi.phi_R0 * est.theta_R0;

  for (std::size_t i = 0; i < params.n(); ++i) {
    const Vec3& q = state.quads[i].q;
    const Vec3 comp_par = q * q.dot(phi.phi_xi[i] * est.theta_xi[i]);
    w.force -= comp_par;
    w.moment -= hat(params.quads[i].attachment) * R0.transpose() * comp_par;
  }
  return w;
}

Allocator::Allocator(const MatX& P) : P_(P) {
  if (!check_rank(P)) {
    throw Error(ErrorCode::RankDeficient, "attachment matrix P has rank < 6");
  }
  const Eigen::Matrix<double, 6, 6> PPt = P * P.transpose();
  pinv_ = P.transpose() * PPt.ldlt().solve(Eigen::Matrix<double, 6, 6>::Identity());
}

std::vector<Vec3> Allocator::allocate(const Vec3& F_d, const Vec3& M_d,
                                      const Mat3& R0) const {
  Eigen::Matrix<double, 6, 1> rhs;
  rhs << R0.transpose() * F_d, M_d;
  const VecX body = pinv_ * rhs;
  const auto n = body.size() / 3;
  std::vector<Vec3> mu(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    mu[static_cast<std::size_t>(i)] = R0 * body.segment<3>(3 * i);
  }
  return mu;
}

std::vector<Vec3> allocate(const Vec3& F_d, const Vec3& M_d, const Mat3& R0,
                           const MatX& P) {
  return Allocator(P).allocate(F_d, M_d, R0);
}

Vec3 link_direction(const Vec3& mu_d) {
  const double norm = mu_d.norm();
  if (!(norm > kMinTension)) {
    std::ostringstream os;
    os << "|mu_d| = " << norm;
    throw Error(ErrorCode::DegenerateTension, os.str());
  }
  return -mu_d / norm;
}

Vec3 link_rate(const std::vector<Vec3>& history, double dt) {
  if (history.empty()) {
    throw Error(ErrorCode::InsufficientHistory, "no q_d samples");
  }
  const std::size_t k = history.size();
  const Vec3& q = history[k - 1];
  if (k == 1) return Vec3::Zero();
  Vec3 q_dot;
  if (k == 2) {
    q_dot = (history[1] - history[0]) / dt;
  } else {
    q_dot = (3.0 * history[k - 1] - 4.0 * history[k - 2] + history[k - 3]) /
            (2.0 * dt);
  }
  return q.cross(q_dot);
}

LinkSetpointTracker::LinkSetpointTracker(double dt, double bandwidth)
    : filter_(dt, bandwidth) {}

LinkSetpointTracker::Setpoint LinkSetpointTracker::update(const Vec3& mu_d) {
  Setpoint sp;
  if (mu_d.norm() > kMinTension) {
    q_d_ = link_direction(mu_d);
    started_ = true;
  } else {
    sp.degenerate = true;
  }
  sp.q_d = q_d_;
  const auto f = filter_.update(q_d_);
  sp.omega_d = q_d_.cross(f.rate);
  sp.omega_d_dot = q_d_.cross(f.accel);
  return sp;
}

Vec3 attachment_acceleration(const SystemState& state, const Vec3& x0_ddot,
                             const Vec3& Omega0_dot, const Vec3& rho,
                             double gravity) {
  const Mat3 W = hat(state.Omega0);
  return x0_ddot - gravity * kE3 + state.R0 * W * W * rho -
         state.R0 * hat(rho) * Omega0_dot;
}

Vec3 parallel_input(const Vec3& q, const Vec3& omega, const Vec3& mu_d,
                    const Vec3& a, double mass, double length) {
  return q * (q.dot(mu_d) + mass * q.dot(a)) +
         mass * length * omega.squaredNorm() * q;
}

Vec3 normal_input(const NormalInputArgs& args, const PayloadGains& gains) {
  const Mat3 q_hat = hat(args.q);
  const Mat3 q_hat2 = q_hat * q_hat;
  const Vec3 q_dot = args.omega.cross(args.q);
  const Vec3 inner = -gains.k_q * args.e_q - gains.k_omega * args.e_omega -
                     args.q.dot(args.omega_d) * q_dot - q_hat2 * args.omega_d_dot;
  const Vec3 comp_perp = args.compensation - args.q * args.q.dot(args.compensation);
  return args.mass * args.length * q_hat * inner - args.mass * q_hat2 * args.a -
         comp_perp;
}

}  // namespace payload_control

PayloadController::PayloadController(
    SystemParams params, PayloadGains gains,
    std::shared_ptr<const ReferenceTrajectory> trajectory,
    DisturbanceModel regressors, double dt)
    : params_(std::move(params)),
      gains_(gains),
      trajectory_(std::move(trajectory)),
      regressors_(std::move(regressors)),
      allocator_(build_P(params_)),
      trackers_(params_.n(), payload_control::LinkSetpointTracker(dt, gains_.setpoint_bandwidth)) {}

void PayloadController::accept_accelerations(const Vec3& x0_ddot,
                                             const Vec3& Omega0_dot) {
  x0_ddot_ = x0_ddot;
  Omega0_dot_ = Omega0_dot;
}

ControlOutput PayloadController::compute(double t, const SystemState& state,
                                         const EstimatorState& est) {
  using namespace payload_control;
  const std::size_t n = params_.n();

  ControlOutput out;
  out.t = t;
  out.ref = trajectory_->payload(t);
  out.errors = payload_errors(state, out.ref);
  out.phi = regressor_values(regressors_, t, state);
  out.wrench = desired_wrench(out.errors, out.ref, est, state, params_, gains_,
                              out.phi);
  const auto mu_d = allocator_.allocate(out.wrench.force, out.wrench.moment,
                                        state.R0);

  if (!x0_ddot_) {
    x0_ddot_ = out.ref.a;
    Omega0_dot_ = state.R0.transpose() * out.ref.R * out.ref.Omega_dot;
  }

  out.links.resize(n);
  std::vector<adaptive::LinkTerms> link_terms(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& qp = params_.quads[i];
    const auto& qs = state.quads[i];
    auto& d = out.links[i];
    d.mu_d = mu_d[i];
    d.mu = qs.q * qs.q.dot(mu_d[i]);

    const auto sp = trackers_[i].update(mu_d[i]);
    d.q_d = sp.q_d;
    d.omega_d = sp.omega_d;
    d.omega_d_dot = sp.omega_d_dot;
    const auto le = geom::link_errors(qs.q, d.q_d, qs.omega, d.omega_d);
    d.e_q = le.e_q;
    d.e_omega = le.e_omega;
    d.psi_q = le.psi;

    d.accel = attachment_acceleration(state, *x0_ddot_, Omega0_dot_,
                                      qp.attachment, params_.gravity);
    d.u_par = parallel_input(qs.q, qs.omega, mu_d[i], d.accel, qp.mass,
                             qp.link_length);
    NormalInputArgs args;
    args.q = qs.q;
    args.omega = qs.omega;
    args.e_q = d.e_q;
    args.e_omega = d.e_omega;
    args.omega_d = d.omega_d;
    args.omega_d_dot = d.omega_d_dot;
    args.a = d.accel;
    args.compensation = out.phi.phi_xi[i] * est.theta_xi[i];
    args.mass = qp.mass;
    args.length = qp.link_length;
    d.u_perp = normal_input(args, gains_);
    d.u = d.u_par + d.u_perp;

    link_terms[i] = {qs.q, d.e_q, d.e_omega};
  }
  out.signals = adaptive::regressor_signals(state, out.errors, link_terms, gains_,
                                            est, params_, out.phi);
  return out;
}

}  // namespace cooplift
