#pragma once

#include <vector>

#include "cooplift/adaptive.hpp"
#include "cooplift/control_attitude.hpp"
#include "cooplift/control_payload.hpp"
#include "cooplift/model.hpp"

namespace cooplift {

/// Everything known about one control step, kept when a run is asked for
/// detailed records.
struct StepRecord {
  double t = 0.0;
  SystemState state;
  ControlOutput control;
  EstimatorState estimator;
  std::vector<AttitudeCommand> attitude;  // full model only
  std::vector<Vec3> applied_force;        // force acting at each quadrotor
  // Accelerations at (state, applied inputs).
  Vec3 x0_ddot = Vec3::Zero();
  Vec3 Omega0_dot = Vec3::Zero();
  std::vector<Vec3> omega_dot;
};

}  // namespace cooplift
