#pragma once

#include "cooplift/geom.hpp"

namespace cooplift {

struct PayloadGains {
  double k_x = 8.0;      // position
  double k_v = 6.0;      // velocity
  double k_R = 12.0;     // payload attitude
  double k_Omega = 4.0;  // payload angular velocity
  double k_q = 24.0;     // link direction
  double k_omega = 8.0;  // link angular velocity
  // Cross-term constants shared by the adaptive laws and the Lyapunov function.
  double c_x = 0.5;
  double c_R = 0.5;
  double c_q = 0.5;
  // Natural frequency of the link setpoint tracking filter, rad/s.
  double setpoint_bandwidth = 40.0;

  void validate() const;
};

struct AttitudeGains {
  double k_R = 100.0;
  double l_R = 0.5;
  double k_s = 120.0;
  double l_s = 1.0;
  double r = 0.6;
  // Optional smoothed disturbance-rejection term -B_delta s / max(|s|, eps).
  bool robust = false;
  double B_delta = 0.0;
  double robust_eps = 1e-4;
  // Natural frequency of the R_c tracking filter, rad/s.
  double setpoint_bandwidth = 500.0;

  void validate() const;
};

struct PayloadErrors {
  Vec3 e_x = Vec3::Zero();
  Vec3 e_v = Vec3::Zero();
  Vec3 e_R = Vec3::Zero();
  Vec3 e_Omega = Vec3::Zero();
  double psi_R = 0.0;
};

}  // namespace cooplift
