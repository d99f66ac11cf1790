#include "cooplift/trajectory.hpp"

#include <cmath>

namespace cooplift {

PayloadReference HoverTrajectory::payload(double /*t*/) const {
  PayloadReference ref;
  ref.x = position_;
  ref.R = attitude_;
  return ref;
}

PayloadReference Figure8Trajectory::payload(double t) const {
  const auto& s = shape_;
  const double sx = std::sin(s.wx * t), cx = std::cos(s.wx * t);
  const double sy = std::sin(s.wy * t), cy = std::cos(s.wy * t);

  PayloadReference ref;
  ref.x = Vec3(s.ax * sx, s.ay * cy, s.z);
  ref.v = Vec3(s.ax * s.wx * cx, -s.ay * s.wy * sy, 0.0);
  ref.a = Vec3(-s.ax * s.wx * s.wx * sx, -s.ay * s.wy * s.wy * cy, 0.0);
  const Vec3 jerk(-s.ax * s.wx * s.wx * s.wx * cx,
                  s.ay * s.wy * s.wy * s.wy * sy, 0.0);

  // Heading psi = atan2(vy, vx); R_d = Rz(psi), so Omega_d = psi_dot e3.
  const double vx = ref.v.x(), vy = ref.v.y();
  const double ax = ref.a.x(), ay = ref.a.y();
  const double num = vx * ay - vy * ax;
  const double den = vx * vx + vy * vy;
  const double num_dot = vx * jerk.y() - vy * jerk.x();
  const double den_dot = 2.0 * (vx * ax + vy * ay);
  const double psi_dot = num / den;
  const double psi_ddot = (num_dot * den - num * den_dot) / (den * den);

  const Vec3 b1 = ref.v.normalized();
  const Vec3 b2 = kE3.cross(ref.v).normalized();
  ref.R.col(0) = b1;
  ref.R.col(1) = b2;
  ref.R.col(2) = kE3;
  ref.Omega = psi_dot * kE3;
  ref.Omega_dot = psi_ddot * kE3;
  return ref;
}

}  // namespace cooplift
