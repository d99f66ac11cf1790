#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "cooplift/control_types.hpp"
#include "cooplift/integrator.hpp"
#include "cooplift/model.hpp"
#include "cooplift/trajectory.hpp"

namespace cooplift {

enum class ModelMode { Simplified, Full };

ModelMode parse_model_mode(const std::string& text);
std::string to_string(ModelMode mode);

enum class TrajectoryKind { Figure8, Hover };

struct TrajectorySpec {
  TrajectoryKind kind = TrajectoryKind::Figure8;
  Figure8Trajectory::Shape shape;
  Vec3 hover_position = Vec3::Zero();
  Mat3 hover_attitude = Mat3::Identity();

  std::shared_ptr<const ReferenceTrajectory> build() const;
};

struct AdaptiveSettings {
  bool enabled = true;
  double h_x0 = 10.0;
  double h_R0 = 10.0;
  double h_xi = 10.0;
};

struct Scenario {
  std::string name;
  SystemParams params;
  // True disturbance; its regressors are also the ones the controller knows.
  DisturbanceModel disturbance;
  SystemState initial;
  PayloadGains payload_gains;
  AttitudeGains attitude_gains;
  AdaptiveSettings adaptive;
  TrajectorySpec trajectory;
  IntegratorConfig integrator;
  double t_final = 20.0;  // s
  ModelMode model = ModelMode::Simplified;
  // When false every quadrotor input is zero (open-loop ballistic motion).
  bool closed_loop = true;

  /// Throws ValidationError with the offending field path.
  void validate() const;
};

/// Maximum step accepted for the full model; the sliding-mode attitude loop
/// chatters beyond it.
inline constexpr double kMaxFullModelStep = 1e-2;  // s

/// INI-style text with [payload], [quadrotor.N], [disturbance], [gains],
/// [trajectory], [sim] and [initial] sections. Throws ParseError or
/// ValidationError.
Scenario parse_scenario(std::istream& in, const std::string& name = "scenario");
Scenario load_scenario(const std::string& path);

/// Three quadrotors carrying a 1.5 kg box along a figure-eight.
Scenario figure8_scenario();

}  // namespace cooplift
