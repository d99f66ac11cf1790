#pragma once

#include <memory>

#include "cooplift/geom.hpp"

namespace cooplift {

struct PayloadReference {
  Vec3 x = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Vec3 a = Vec3::Zero();
  Mat3 R = Mat3::Identity();
  Vec3 Omega = Vec3::Zero();
  Vec3 Omega_dot = Vec3::Zero();
};

/// Desired payload pose and per-quadrotor heading b1_i(t).
class ReferenceTrajectory {
 public:
  virtual ~ReferenceTrajectory() = default;
  virtual PayloadReference payload(double t) const = 0;
  virtual Vec3 heading(std::size_t /*quad*/, double /*t*/) const { return kE1; }
};

/// Payload held at a fixed pose.
class HoverTrajectory final : public ReferenceTrajectory {
 public:
  explicit HoverTrajectory(const Vec3& position, const Mat3& attitude = Mat3::Identity())
      : position_(position), attitude_(attitude) {}

  PayloadReference payload(double t) const override;

 private:
  Vec3 position_;
  Mat3 attitude_;
};

/// x_d(t) = [ax sin(wx t), ay cos(wy t), z]; the payload's first axis is
/// tangent to the path and its third axis points along gravity.
class Figure8Trajectory final : public ReferenceTrajectory {
 public:
  struct Shape {
    double ax = 1.2;
    double wx = 0.2 * 3.14159265358979323846;
    double ay = 4.2;
    double wy = 0.1 * 3.14159265358979323846;
    double z = -0.5;
  };

  Figure8Trajectory() = default;
  explicit Figure8Trajectory(const Shape& shape) : shape_(shape) {}

  PayloadReference payload(double t) const override;
  const Shape& shape() const { return shape_; }

 private:
  Shape shape_;
};

}  // namespace cooplift
