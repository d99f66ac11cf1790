#include "cooplift/control_attitude.hpp"

#include <cmath>
#include <sstream>

#include "cooplift/error.hpp"

namespace cooplift {

using geom::hat;

void AttitudeGains::validate() const {
  for (double k : {k_R, l_R, k_s, l_s, setpoint_bandwidth}) {
    if (!(k > 0.0)) {
      throw Error(ErrorCode::ValidationError, "gains: attitude gains must be > 0");
    }
  }
  if (!(r > 0.0 && r < 1.0)) {
    throw Error(ErrorCode::ValidationError, "gains.r: must lie in (0, 1)");
  }
  if (robust && !(B_delta >= 0.0 && robust_eps > 0.0)) {
    throw Error(ErrorCode::ValidationError,
                "gains.B_delta: robust term needs B_delta >= 0 and eps > 0");
  }
}

namespace attitude_control {

Mat3 desired_attitude(const Vec3& u, const Vec3& b1) {
  const double norm = u.norm();
  if (!(norm > kMinThrust)) {
    std::ostringstream os;
    os << "|u| = " << norm;
    throw Error(ErrorCode::DegenerateThrust, os.str());
  }
  const Vec3 b3 = -u / norm;
  const Vec3 b3_x_b1 = b3.cross(b1);
  const double sin_angle = b3_x_b1.norm() / b1.norm();
  if (!(sin_angle > std::sin(kMinHeadingAngle))) {
    throw Error(ErrorCode::HeadingCollinear, "b1 is parallel to b3");
  }
  const Vec3 c1 = -b3.cross(b3_x_b1);
  Mat3 R_c;
  R_c.col(0) = c1.normalized();
  R_c.col(1) = b3_x_b1.normalized();
  R_c.col(2) = b3;
  return R_c;
}

DesiredRates desired_rates(const std::vector<Mat3>& history, double dt) {
  const std::size_t k = history.size();
  if (k < 3) {
    throw Error(ErrorCode::InsufficientHistory,
                "desired_rates needs 3 samples, got " + std::to_string(k));
  }
  // Midpoint rates from the group logarithm, then extrapolate to the newest
  // sample.
  const Vec3 w_late = geom::log_so3(history[k - 2].transpose() * history[k - 1]) / dt;
  const Vec3 w_early = geom::log_so3(history[k - 3].transpose() * history[k - 2]) / dt;
  DesiredRates out;
  out.Omega_c = 1.5 * w_late - 0.5 * w_early;
  out.Omega_c_dot = (w_late - w_early) / dt;
  return out;
}

Vec3 sliding_surface(const Vec3& e_R, const Vec3& e_Omega, const AttitudeGains& gains) {
  return e_Omega + gains.k_R * e_R + gains.l_R * geom::signed_power(gains.r, e_R);
}

MomentResult moment_command(const Mat3& R, const Vec3& Omega, const Mat3& J,
                            const Mat3& R_c, const Vec3& Omega_c,
                            const Vec3& Omega_c_dot, const AttitudeGains& gains) {
  const auto err = geom::attitude_errors(R, R_c, Omega, Omega_c);
  MomentResult out;
  out.e_R = err.e_R;
  out.e_Omega = err.e_Omega;
  out.psi = err.psi;
  out.s = sliding_surface(err.e_R, err.e_Omega, gains);

  const Mat3 RtRc = R.transpose() * R_c;
  const Mat3 E = geom::transport_matrix(R, R_c);
  const Mat3 surface_gain =
      gains.k_R * J + gains.l_R * gains.r * J * geom::signed_power_gain(gains.r, err.e_R);

  out.moment = -gains.k_s * out.s - gains.l_s * geom::signed_power(gains.r, out.s) +
               Omega.cross(J * Omega) - surface_gain * E * err.e_Omega -
               J * (hat(Omega) * RtRc * Omega_c - RtRc * Omega_c_dot);
  if (gains.robust) {
    out.moment -= gains.B_delta * out.s / std::max(out.s.norm(), gains.robust_eps);
  }
  return out;
}

double thrust_magnitude(const Vec3& u, const Mat3& R) {
  return -u.dot(R * kE3);
}

}  // namespace attitude_control

AttitudeController::AttitudeController(AttitudeGains gains, Mat3 inertia, double dt)
    : gains_(gains), inertia_(inertia), dt_(dt), filter_(dt, gains.setpoint_bandwidth) {}

AttitudeCommand AttitudeController::compute(const Vec3& u, const Vec3& b1,
                                            const Mat3& R, const Vec3& Omega) {
  using namespace attitude_control;
  AttitudeCommand cmd;
  Vec3 raw_rate = Vec3::Zero();
  try {
    const Mat3 R_c = desired_attitude(u, b1);
    if (started_) raw_rate = geom::log_so3(R_c_.transpose() * R_c) / dt_;
    R_c_ = R_c;
    started_ = true;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateThrust || !started_) throw;
    cmd.degenerate = true;
  }
  cmd.R_c = R_c_;
  const auto f = filter_.update(raw_rate);
  cmd.Omega_c = f.value;
  cmd.Omega_c_dot = f.rate;

  cmd.moment = moment_command(R, Omega, inertia_, cmd.R_c, cmd.Omega_c,
                              cmd.Omega_c_dot, gains_);
  cmd.thrust = thrust_magnitude(u, R);
  return cmd;
}

}  // namespace cooplift
