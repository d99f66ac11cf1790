#include "cooplift/verification.hpp"

#include <algorithm>
#include <cmath>

namespace cooplift {

using geom::hat;

double LyapunovBreakdown::tracking() const {
  double v = translation + rotation;
  for (double l : links) v += l;
  return v;
}

double LyapunovBreakdown::total() const { return tracking() + estimation; }

namespace verification {

TrackingErrors tracking_errors(const ControlOutput& control) {
  TrackingErrors e;
  e.payload = control.errors;
  e.links.reserve(control.links.size());
  for (const auto& l : control.links) {
    e.links.push_back({l.e_q, l.e_omega, l.psi_q});
  }
  return e;
}

LyapunovBreakdown lyapunov_value(const TrackingErrors& errors,
                                 const EstimatorState& est,
                                 const DisturbanceModel& truth,
                                 const SystemParams& params,
                                 const PayloadGains& gains) {
  const auto& p = errors.payload;
  const Mat3& J0 = params.payload_inertia;
  LyapunovBreakdown v;
  v.translation = 0.5 * p.e_v.squaredNorm() + 0.5 * gains.k_x * p.e_x.squaredNorm() +
                  gains.c_x * p.e_x.dot(p.e_v);
  v.rotation = 0.5 * p.e_Omega.dot(J0 * p.e_Omega) + gains.k_R * p.psi_R +
               gains.c_R * p.e_R.dot(J0 * p.e_Omega);
  for (const auto& l : errors.links) {
    v.links.push_back(0.5 * l.e_omega.squaredNorm() + gains.k_q * l.psi +
                      gains.c_q * l.e_q.dot(l.e_omega));
  }
  v.estimation = 0.5 / est.h_x0 * (truth.theta_x0 - est.theta_x0).squaredNorm() +
                 0.5 / est.h_R0 * (truth.theta_R0 - est.theta_R0).squaredNorm();
  for (std::size_t i = 0; i < est.theta_xi.size(); ++i) {
    v.estimation += 0.5 / est.h_xi * (truth.theta_xi[i] - est.theta_xi[i]).squaredNorm();
  }
  return v;
}

QuadraticBounds translation_bounds(const PayloadGains& g) {
  QuadraticBounds b;
  b.lower << g.k_x, -g.c_x, -g.c_x, 1.0;
  b.upper << g.k_x, g.c_x, g.c_x, 1.0;
  b.lower *= 0.5;
  b.upper *= 0.5;
  return b;
}

QuadraticBounds rotation_bounds(const PayloadGains& g, const Mat3& J0, double psi_R0) {
  const Eigen::SelfAdjointEigenSolver<Mat3> eig(J0);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  QuadraticBounds b;
  // k_R Psi >= 0.5 k_R |e_R|^2 gives a k_R (not 2 k_R) leading entry.
  b.lower << g.k_R, -g.c_R * hi, -g.c_R * hi, lo;
  b.upper << 2.0 * g.k_R / (2.0 - psi_R0), g.c_R * hi, g.c_R * hi, hi;
  b.lower *= 0.5;
  b.upper *= 0.5;
  return b;
}

QuadraticBounds link_bounds(const PayloadGains& g, double psi_q) {
  QuadraticBounds b;
  b.lower << g.k_q, -g.c_q, -g.c_q, 1.0;
  b.upper << 2.0 * g.k_q / (2.0 - psi_q), g.c_q, g.c_q, 1.0;
  b.lower *= 0.5;
  b.upper *= 0.5;
  return b;
}

GainCheck gain_check(const PayloadGains& g, const SystemParams& params,
                     const GainCheckBounds& bounds) {
  using Mat2 = Eigen::Matrix2d;
  const auto n = static_cast<double>(params.n());
  const double m0 = params.payload_mass;
  const MatX P = build_P(params);
  const Eigen::Matrix<double, 6, 6> PPt = P * P.transpose();
  const double lam_P = Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>>(PPt)
                           .eigenvalues()
                           .minCoeff();
  const double gamma = 1.0 / (m0 * std::sqrt(lam_P));
  const double beta = m0 * gamma;
  const double J_max = Eigen::SelfAdjointEigenSolver<Mat3>(params.payload_inertia)
                           .eigenvalues()
                           .maxCoeff();
  const double alpha_0 = std::sqrt(bounds.psi_R0 * (2.0 - bounds.psi_R0));
  const double alpha = std::sqrt(bounds.psi_q * (2.0 - bounds.psi_q));
  const double B = bounds.B;

  auto lam_min = [](const Mat2& M) {
    return Eigen::SelfAdjointEigenSolver<Mat2>(0.5 * (M + M.transpose()))
        .eigenvalues()
        .minCoeff();
  };
  auto spectral = [](const Mat2& M) {
    return Eigen::JacobiSVD<Mat2>(M).singularValues()(0);
  };

  GainCheck out;
  out.n_alpha_beta = n * alpha * beta;
  for (const auto& qp : params.quads) {
    const double delta = m0 * hat(qp.attachment).norm() / std::sqrt(lam_P);
    const double sigma = delta / m0;
    const double nab = n * alpha * beta;
    const double nas = n * alpha * sigma;

    Mat2 Wx;
    Wx << g.c_x * g.k_x * (1.0 - nab), -0.5 * g.c_x * g.k_v * (1.0 + nab),
        -0.5 * g.c_x * g.k_v * (1.0 + nab), g.k_v * (1.0 - nab) - g.c_x;
    Wx /= n;
    Mat2 WR;
    WR << g.c_R * g.k_R * (1.0 - nas), -0.5 * g.c_R * (g.k_Omega + B + nas),
        -0.5 * g.c_R * (g.k_Omega + B + nas), g.k_Omega * (1.0 - nas) - 2.0 * g.c_R * J_max;
    WR /= n;
    Mat2 Wq;
    Wq << g.c_q * g.k_q, -0.5 * g.c_q * g.k_omega, -0.5 * g.c_q * g.k_omega,
        g.k_omega - g.c_q;
    Mat2 WxR;
    WxR << gamma * g.c_x * g.k_R + delta * g.c_R * g.k_x,
        gamma * g.c_x * g.k_Omega + delta * g.k_x,
        gamma * g.k_R + delta * g.c_R * g.k_v, gamma * g.k_Omega + delta * g.k_v;
    WxR *= alpha;
    Mat2 Wxq;
    Wxq << g.c_x * B, 0.0, beta * g.k_x * bounds.e_x_max + B, 0.0;
    Mat2 WRq;
    WRq << g.c_R * B, 0.0, alpha_0 * sigma * g.k_R + B, 0.0;

    Mat3 W;
    W << lam_min(Wx), -0.5 * spectral(WxR), -0.5 * spectral(Wxq),
        -0.5 * spectral(WxR), lam_min(WR), -0.5 * spectral(WRq),
        -0.5 * spectral(Wxq), -0.5 * spectral(WRq), lam_min(Wq);
    out.W.push_back(W);
    out.lambda_min.push_back(
        Eigen::SelfAdjointEigenSolver<Mat3>(W).eigenvalues().minCoeff());
  }
  return out;
}

ErrorResiduals error_residuals(const std::vector<StepRecord>& log,
                               const DisturbanceModel& truth,
                               const SystemParams& params,
                               const PayloadGains& g) {
  const double m0 = params.payload_mass;
  const Mat3& J0 = params.payload_inertia;
  ErrorResiduals out;
  for (const auto& rec : log) {
    const auto& c = rec.control;
    const auto& e = c.errors;
    const auto& s = rec.state;
    const Mat3& R0 = s.R0;
    const Mat3 RtRd = R0.transpose() * c.ref.R;
    const Vec3 Omega_d_body = RtRd * c.ref.Omega;

    Vec3 Y_x = Vec3::Zero();
    Vec3 Y_R = Vec3::Zero();
    Vec3 comp_x = truth.phi_x0.matrix(c.t, s) * truth.theta_x0 -
                  c.phi.phi_x0 * rec.estimator.theta_x0;
    Vec3 comp_R = truth.phi_R0.matrix(c.t, s) * truth.theta_R0 -
                  c.phi.phi_R0 * rec.estimator.theta_R0;
    double envelope = 0.0;
    double link_max = 0.0;
    for (std::size_t i = 0; i < params.n(); ++i) {
      const auto& qp = params.quads[i];
      const auto& qs = s.quads[i];
      const auto& l = c.links[i];
      const Mat3 qq = qs.q * qs.q.transpose();
      const Vec3 miss = (qq - Mat3::Identity()) * l.mu_d;
      Y_x += miss / m0;
      Y_R += hat(qp.attachment) * R0.transpose() * miss;
      envelope += l.mu_d.norm() * l.e_q.norm() / m0;

      const Vec3 theta_err_force = truth.phi_xi.matrix(c.t, s) * truth.theta_xi[i] -
                                   c.phi.phi_xi[i] * rec.estimator.theta_xi[i];
      const Vec3 par = qq * theta_err_force;
      const Vec3 perp = theta_err_force - par;
      comp_x += par;
      comp_R += hat(qp.attachment) * R0.transpose() * par;

      const Mat3 qh = hat(qs.q);
      const Vec3 q_dot = qs.omega.cross(qs.q);
      const Vec3 lhs = rec.omega_dot[i] + qs.q.dot(l.omega_d) * q_dot +
                       qh * qh * l.omega_d_dot;
      const Vec3 rhs = -g.k_q * l.e_q - g.k_omega * l.e_omega -
                       qh * perp / (qp.mass * qp.link_length);
      link_max = std::max(link_max, (lhs - rhs).norm());
    }

    const Vec3 ex_ddot = rec.x0_ddot - c.ref.a;
    const Vec3 pos_pred = -g.k_x * e.e_x - g.k_v * e.e_v + comp_x / m0 + Y_x;
    out.position.push_back((ex_ddot - pos_pred).norm());

    const Vec3 eW_dot = rec.Omega0_dot + s.Omega0.cross(Omega_d_body) -
                        RtRd * c.ref.Omega_dot;
    const Vec3 d = (2.0 * J0 - J0.trace() * Mat3::Identity()) * Omega_d_body;
    const Vec3 rot_pred = (J0 * e.e_Omega + d).cross(e.e_Omega) - g.k_R * e.e_R -
                          g.k_Omega * e.e_Omega + comp_R + Y_R;
    out.rotation.push_back((J0 * eW_dot - rot_pred).norm());

    out.link.push_back(link_max);
    out.Y_x.push_back(Y_x.norm());
    out.Y_x_envelope.push_back(envelope);
  }
  return out;
}

std::pair<double, double> sliding_rates(const AttitudeGains& gains, const Mat3& J) {
  const double lam = Eigen::SelfAdjointEigenSolver<Mat3>(J).eigenvalues().maxCoeff();
  const double eps1 = 2.0 * gains.k_s / lam;
  const double eps2 = gains.l_s * std::pow(2.0 / lam, 0.5 * (gains.r + 1.0));
  return {eps1, eps2};
}

namespace {
double finite_time_bound(double a, double b, double r, double V0) {
  return 2.0 / (a * (1.0 - r)) *
         std::log((a * std::pow(V0, 0.5 * (1.0 - r)) + b) / b);
}
}  // namespace

double sliding_settling_bound(const AttitudeGains& gains, const Mat3& J, double W0) {
  const auto [eps1, eps2] = sliding_rates(gains, J);
  return finite_time_bound(eps1, eps2, gains.r, W0);
}

double attitude_settling_bound(const AttitudeGains& gains, double psi_R, double Psi0) {
  const double eps3 = gains.k_R / (2.0 - psi_R);
  const double eps4 = gains.l_R / std::pow(2.0 - psi_R, 0.5 * (gains.r + 1.0));
  return finite_time_bound(eps3, eps4, gains.r, Psi0);
}

}  // namespace verification
}  // namespace cooplift
