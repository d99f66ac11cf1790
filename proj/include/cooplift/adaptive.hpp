#pragma once

#include <vector>

#include "cooplift/control_types.hpp"
#include "cooplift/model.hpp"

namespace cooplift {

struct EstimatorState {
  VecX theta_x0;
  VecX theta_R0;
  std::vector<VecX> theta_xi;
  double h_x0 = 10.0;
  double h_R0 = 10.0;
  double h_xi = 10.0;
  double bound = 5.0;  // B_theta

  /// Zero estimates of size n_theta for n quadrotors.
  static EstimatorState zero(std::size_t n, int n_theta, double bound);

  double max_norm() const;
};

struct AdaptiveSignals {
  VecX y_x0;
  VecX y_R0;
  std::vector<VecX> y_xi;
};

namespace adaptive {

/// Relative tolerance for deciding that an estimate sits on the ball boundary.
inline constexpr double kBoundaryTolerance = 1e-9;

/// Parameter projection onto the ball of radius `bound`. Throws OutOfBall if
/// ||theta_bar|| exceeds the bound.
VecX project(const VecX& theta_bar, const VecX& y, double bound);

struct LinkTerms {
  Vec3 q;
  Vec3 e_q;
  Vec3 e_omega;
};

struct RegressorValues {
  MatX phi_x0;               // 3 x n_theta
  MatX phi_R0;               // 3 x n_theta
  std::vector<MatX> phi_xi;  // 3 x n_theta each
};

/// Unprojected update directions y_x0, y_R0, y_xi.
AdaptiveSignals regressor_signals(const SystemState& state,
                                  const PayloadErrors& payload,
                                  const std::vector<LinkTerms>& links,
                                  const PayloadGains& gains,
                                  const EstimatorState& est,
                                  const SystemParams& params,
                                  const RegressorValues& phi);

/// Explicit Euler step of the projected laws followed by a radial clamp.
EstimatorState step(const EstimatorState& est, const AdaptiveSignals& signals,
                    double dt);

}  // namespace adaptive
}  // namespace cooplift
