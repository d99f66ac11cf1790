#include "cooplift/filter.hpp"

#include "cooplift/error.hpp"

namespace cooplift {

TrackingFilter::TrackingFilter(double dt, double bandwidth) : dt_(dt), wn_(bandwidth) {
  if (!(dt > 0.0 && bandwidth > 0.0)) {
    throw Error(ErrorCode::ValidationError, "filter: dt and bandwidth must be > 0");
  }
}

TrackingFilter::Output TrackingFilter::update(const Vec3& x) {
  if (!started_) {
    z_ = x;
    z_dot_.setZero();
    started_ = true;
    return {z_, z_dot_, Vec3::Zero()};
  }
  const Vec3 accel = wn_ * wn_ * (x - z_) - 2.0 * wn_ * z_dot_;
  z_dot_ += dt_ * accel;
  z_ += dt_ * z_dot_;
  return {z_, z_dot_, accel};
}

}  // namespace cooplift
