#include "cooplift/adaptive.hpp"

#include <sstream>

#include "cooplift/error.hpp"

namespace cooplift {

EstimatorState EstimatorState::zero(std::size_t n, int n_theta, double bound) {
  EstimatorState est;
  est.theta_x0 = VecX::Zero(n_theta);
  est.theta_R0 = VecX::Zero(n_theta);
  est.theta_xi.assign(n, VecX::Zero(n_theta));
  est.bound = bound;
  return est;
}

double EstimatorState::max_norm() const {
  double m = std::max(theta_x0.norm(), theta_R0.norm());
  for (const auto& th : theta_xi) m = std::max(m, th.norm());
  return m;
}

namespace adaptive {

VecX project(const VecX& theta_bar, const VecX& y, double bound) {
  const double norm = theta_bar.norm();
  if (norm > bound * (1.0 + kBoundaryTolerance)) {
    std::ostringstream os;
    os << "||theta_bar|| = " << norm << " exceeds bound " << bound;
    throw Error(ErrorCode::OutOfBall, os.str());
  }
  if (norm < bound * (1.0 - kBoundaryTolerance)) return y;
  const double radial = theta_bar.dot(y);
  if (radial <= 0.0) return y;
  return y - theta_bar * (radial / (norm * norm));
}

AdaptiveSignals regressor_signals(const SystemState& state,
                                  const PayloadErrors& payload,
                                  const std::vector<LinkTerms>& links,
                                  const PayloadGains& gains,
                                  const EstimatorState& est,
                                  const SystemParams& params,
                                  const RegressorValues& phi) {
  const Vec3 trans = (payload.e_v + gains.c_x * payload.e_x) / params.payload_mass;
  const Vec3 rot = payload.e_Omega + gains.c_R * payload.e_R;

  AdaptiveSignals s;
  s.y_x0 = est.h_x0 * phi.phi_x0.transpose() * trans;
  s.y_R0 = est.h_R0 * phi.phi_R0.transpose() * rot;
  s.y_xi.resize(params.n());
  for (std::size_t i = 0; i < params.n(); ++i) {
    const auto& qp = params.quads[i];
    const auto& link = links[i];
    const Vec3 along = link.q * link.q.dot(
        trans - state.R0 * geom::hat(qp.attachment) * rot);
    const Vec3 normal = link.q.cross(link.e_omega + gains.c_q * link.e_q) /
                        (qp.mass * qp.link_length);
    s.y_xi[i] = est.h_xi * phi.phi_xi[i].transpose() * (along + normal);
  }
  return s;
}

namespace {
VecX advance(const VecX& theta, const VecX& y, double dt, double bound) {
  VecX next = theta + dt * project(theta, y, bound);
  const double norm = next.norm();
  if (norm > bound) next *= bound / norm;
  return next;
}
}  // namespace

EstimatorState step(const EstimatorState& est, const AdaptiveSignals& signals,
                    double dt) {
  EstimatorState next = est;
  next.theta_x0 = advance(est.theta_x0, signals.y_x0, dt, est.bound);
  next.theta_R0 = advance(est.theta_R0, signals.y_R0, dt, est.bound);
  for (std::size_t i = 0; i < est.theta_xi.size(); ++i) {
    next.theta_xi[i] = advance(est.theta_xi[i], signals.y_xi[i], dt, est.bound);
  }
  return next;
}

}  // namespace adaptive
}  // namespace cooplift
