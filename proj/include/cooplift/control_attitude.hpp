#pragma once

#include <optional>
#include <vector>

#include "cooplift/control_types.hpp"
#include "cooplift/filter.hpp"

namespace cooplift {
namespace attitude_control {

inline constexpr double kMinThrust = 1e-6;         // N
inline constexpr double kMinHeadingAngle = 1e-3;   // rad

/// R_c = [-(hat(b3)^2 b1)/|.|, hat(b3) b1/|.|, b3] with b3 = -u/|u|.
/// Throws DegenerateThrust or HeadingCollinear.
Mat3 desired_attitude(const Vec3& u, const Vec3& b1);

struct DesiredRates {
  Vec3 Omega_c = Vec3::Zero();
  Vec3 Omega_c_dot = Vec3::Zero();  // unfiltered
};

/// Body rate and its derivative from the last three equally spaced samples
/// of R_c (newest last). Throws InsufficientHistory with fewer than three.
DesiredRates desired_rates(const std::vector<Mat3>& history, double dt);

/// s = e_Omega + k_R e_R + l_R S(r, e_R).
Vec3 sliding_surface(const Vec3& e_R, const Vec3& e_Omega, const AttitudeGains& gains);

struct MomentResult {
  Vec3 moment = Vec3::Zero();
  Vec3 s = Vec3::Zero();
  Vec3 e_R = Vec3::Zero();
  Vec3 e_Omega = Vec3::Zero();
  double psi = 0.0;
};

/// Finite-time terminal sliding moment law. The |e_R_j|^(r-1) factor is
/// clamped at geom::kSignedPowerFloor.
MomentResult moment_command(const Mat3& R, const Vec3& Omega, const Mat3& J,
                            const Mat3& R_c, const Vec3& Omega_c,
                            const Vec3& Omega_c_dot, const AttitudeGains& gains);

/// f = -u . R e3.
double thrust_magnitude(const Vec3& u, const Mat3& R);

}  // namespace attitude_control

struct AttitudeCommand {
  Mat3 R_c = Mat3::Identity();
  Vec3 Omega_c = Vec3::Zero();
  Vec3 Omega_c_dot = Vec3::Zero();
  attitude_control::MomentResult moment;
  double thrust = 0.0;
  bool degenerate = false;
};

/// Per-quadrotor attitude loop. The backward group-log rate
/// log(R_c,prevᵀ R_c)/dt passes through a tracking filter whose value and
/// rate give Omega_c and Omega_c_dot.
class AttitudeController {
 public:
  AttitudeController(AttitudeGains gains, Mat3 inertia, double dt);

  AttitudeCommand compute(const Vec3& u, const Vec3& b1, const Mat3& R,
                          const Vec3& Omega);

 private:
  AttitudeGains gains_;
  Mat3 inertia_;
  double dt_;
  TrackingFilter filter_;
  bool started_ = false;
  Mat3 R_c_ = Mat3::Identity();
};

}  // namespace cooplift
