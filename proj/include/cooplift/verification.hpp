#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cooplift/record.hpp"

namespace cooplift {

struct LyapunovBreakdown {
  double translation = 0.0;
  double rotation = 0.0;
  std::vector<double> links;
  double estimation = 0.0;

  double tracking() const;  // V0
  double total() const;     // V0 + Va
};

namespace verification {

struct TrackingErrors {
  PayloadErrors payload;
  std::vector<geom::LinkErrors> links;
};

TrackingErrors tracking_errors(const ControlOutput& control);

/// V = V0 + Va with cross terms c_x e_x.e_v, c_R e_R.J0 e_Omega and
/// c_q e_q.e_omega.
LyapunovBreakdown lyapunov_value(const TrackingErrors& errors,
                                 const EstimatorState& est,
                                 const DisturbanceModel& truth,
                                 const SystemParams& params,
                                 const PayloadGains& gains);

/// 2x2 matrices with z^T lower z <= V0 term <= z^T upper z, where z holds
/// the norms of the configuration and velocity errors.
struct QuadraticBounds {
  Eigen::Matrix2d lower;
  Eigen::Matrix2d upper;
};

QuadraticBounds translation_bounds(const PayloadGains& gains);
/// Valid while Psi_R0 < psi_R0.
QuadraticBounds rotation_bounds(const PayloadGains& gains, const Mat3& J0,
                                double psi_R0);
/// Valid while Psi_q < psi_q.
QuadraticBounds link_bounds(const PayloadGains& gains, double psi_q);

/// Constants entering the dissipation matrices W_i.
struct GainCheckBounds {
  double psi_R0 = 0.1;
  double psi_q = 0.1;
  double B = 1.0;        // trajectory/disturbance dependent bound
  double e_x_max = 1.0;  // m
};

struct GainCheck {
  std::vector<Mat3> W;            // W_i
  std::vector<double> lambda_min; // lambda_m[W_i]
  double n_alpha_beta = 0.0;      // must stay below 1
};

/// Tuning helper: assembles W_i from the gains and reports its smallest
/// eigenvalue. Positive values for every i mean the sufficient condition
/// holds for the supplied bounds.
GainCheck gain_check(const PayloadGains& gains, const SystemParams& params,
                     const GainCheckBounds& bounds);

/// Per-step residuals of the closed-loop error dynamics.
struct ErrorResiduals {
  std::vector<double> position;     // |e_x0 ddot - predicted|, m/s^2
  std::vector<double> rotation;     // |J0 e_Omega0 dot - predicted|, N m
  std::vector<double> link;         // max_i |link residual|, rad/s^2
  std::vector<double> Y_x;          // |Y_x|
  std::vector<double> Y_x_envelope; // sum |mu_id| |e_qi| / m0
};

/// Residuals for every record of a simplified-model run. The controller's
/// one-step acceleration lag shows up as an O(dt) residual.
ErrorResiduals error_residuals(const std::vector<StepRecord>& log,
                               const DisturbanceModel& truth,
                               const SystemParams& params,
                               const PayloadGains& gains);

/// Upper bound on the time for s to reach zero from W(0) = 0.5 s.J s.
double sliding_settling_bound(const AttitudeGains& gains, const Mat3& J,
                              double W0);

/// Upper bound on the time for Psi_R to reach zero on s = 0, valid while
/// Psi_R < psi_R < 2.
double attitude_settling_bound(const AttitudeGains& gains, double psi_R,
                               double Psi0);

/// Decay constants (eps1, eps2) of the sliding-surface Lyapunov function.
std::pair<double, double> sliding_rates(const AttitudeGains& gains, const Mat3& J);

}  // namespace verification
}  // namespace cooplift
