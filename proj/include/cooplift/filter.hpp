#pragma once

#include "cooplift/geom.hpp"

namespace cooplift {

/// Critically damped second-order tracking filter for a 3-vector signal,
/// z_ddot = wn^2 (x - z) - 2 wn z_dot, stepped with semi-implicit Euler.
/// The first sample initialises z = x and z_dot = 0. The returned accel is the
/// value applied during the step.
class TrackingFilter {
 public:
  struct Output {
    Vec3 value;
    Vec3 rate;
    Vec3 accel;
  };

  TrackingFilter(double dt, double bandwidth);

  Output update(const Vec3& x);

 private:
  double dt_;
  double wn_;
  bool started_ = false;
  Vec3 z_ = Vec3::Zero();
  Vec3 z_dot_ = Vec3::Zero();
};

}  // namespace cooplift
