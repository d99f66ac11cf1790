#pragma once

#include <deque>
#include <memory>
#include <optional>
#include <vector>

#include "cooplift/adaptive.hpp"
#include "cooplift/control_types.hpp"
#include "cooplift/filter.hpp"
#include "cooplift/model.hpp"
#include "cooplift/trajectory.hpp"

namespace cooplift {

struct Wrench {
  Vec3 force = Vec3::Zero();   // F_d, inertial frame
  Vec3 moment = Vec3::Zero();  // M_d, payload body frame
};

namespace payload_control {

/// Tension threshold below which q_id is undefined.
inline constexpr double kMinTension = 1e-6;

PayloadErrors payload_errors(const SystemState& state, const PayloadReference& ref);

/// Known regressors evaluated at (t, state), used for compensation.
adaptive::RegressorValues regressor_values(const DisturbanceModel& model,
                                           double t, const SystemState& state);

Wrench desired_wrench(const PayloadErrors& errors, const PayloadReference& ref,
                      const EstimatorState& est, const SystemState& state,
                      const SystemParams& params, const PayloadGains& gains,
                      const adaptive::RegressorValues& phi);

/// Minimum-norm tension allocation for a fixed attachment geometry.
class Allocator {
 public:
  /// Throws RankDeficient when check_rank(P) fails.
  explicit Allocator(const MatX& P);

  /// Desired link force vectors mu_id (inertial frame).
  std::vector<Vec3> allocate(const Vec3& F_d, const Vec3& M_d, const Mat3& R0) const;

  const MatX& P() const { return P_; }

 private:
  MatX P_;
  MatX pinv_;  // P^T (P P^T)^{-1}
};

std::vector<Vec3> allocate(const Vec3& F_d, const Vec3& M_d, const Mat3& R0,
                           const MatX& P);

/// q_id = -mu / |mu|; DegenerateTension when |mu| <= kMinTension.
Vec3 link_direction(const Vec3& mu_d);

/// omega_d = q_d x q_d_dot with q_d_dot from a backward difference over up
/// to three equally spaced samples (newest last); InsufficientHistory when
/// empty.
Vec3 link_rate(const std::vector<Vec3>& history, double dt);

/// Link setpoint generator for one link. q_d = -mu_d/|mu_d| feeds a
/// critically damped second-order tracking filter whose velocity and
/// acceleration give q_d_dot and q_d_ddot, so that
/// omega_d = q_d x q_d_dot and omega_d_dot = q_d x q_d_ddot.
class LinkSetpointTracker {
 public:
  struct Setpoint {
    Vec3 q_d;
    Vec3 omega_d;
    Vec3 omega_d_dot;
    bool degenerate = false;
  };

  /// `bandwidth` is the filter natural frequency in rad/s.
  LinkSetpointTracker(double dt, double bandwidth);

  Setpoint update(const Vec3& mu_d);

 private:
  TrackingFilter filter_;
  bool started_ = false;
  Vec3 q_d_ = kE3;
};

/// a_i = x0_ddot - g e3 + R0 hat(Omega0)^2 rho_i - R0 hat(rho_i) Omega0_dot.
Vec3 attachment_acceleration(const SystemState& state, const Vec3& x0_ddot,
                             const Vec3& Omega0_dot, const Vec3& rho,
                             double gravity);

/// u_par = q q^T mu_d + m l |omega|^2 q + m q q^T a.
Vec3 parallel_input(const Vec3& q, const Vec3& omega, const Vec3& mu_d,
                    const Vec3& a, double mass, double length);

struct NormalInputArgs {
  Vec3 q;
  Vec3 omega;
  Vec3 e_q;
  Vec3 e_omega;
  Vec3 omega_d;
  Vec3 omega_d_dot;
  Vec3 a;
  Vec3 compensation;  // Phi_xi^perp theta_bar_xi
  double mass = 0.0;
  double length = 0.0;
};

Vec3 normal_input(const NormalInputArgs& args, const PayloadGains& gains);

}  // namespace payload_control

struct LinkDiagnostics {
  Vec3 mu_d = Vec3::Zero();
  Vec3 mu = Vec3::Zero();       // q q^T mu_d
  Vec3 q_d = kE3;
  Vec3 omega_d = Vec3::Zero();
  Vec3 omega_d_dot = Vec3::Zero();
  Vec3 e_q = Vec3::Zero();
  Vec3 e_omega = Vec3::Zero();
  double psi_q = 0.0;
  Vec3 accel = Vec3::Zero();    // a_i used by the controller
  Vec3 u_par = Vec3::Zero();
  Vec3 u_perp = Vec3::Zero();
  Vec3 u = Vec3::Zero();
};

struct ControlOutput {
  double t = 0.0;
  PayloadReference ref;
  PayloadErrors errors;
  Wrench wrench;
  std::vector<LinkDiagnostics> links;
  adaptive::RegressorValues phi;
  AdaptiveSignals signals;

  std::vector<Vec3> forces() const;
};

/// The simplified-model controller. Holds link setpoint histories and the
/// previous accepted payload accelerations used in a_i.
class PayloadController {
 public:
  PayloadController(SystemParams params, PayloadGains gains,
                    std::shared_ptr<const ReferenceTrajectory> trajectory,
                    DisturbanceModel regressors, double dt);

  ControlOutput compute(double t, const SystemState& state,
                        const EstimatorState& est);

  /// Payload accelerations from the latest accepted integration step.
  void accept_accelerations(const Vec3& x0_ddot, const Vec3& Omega0_dot);

  const SystemParams& params() const { return params_; }
  const PayloadGains& gains() const { return gains_; }
  const ReferenceTrajectory& trajectory() const { return *trajectory_; }
  const payload_control::Allocator& allocator() const { return allocator_; }

 private:
  SystemParams params_;
  PayloadGains gains_;
  std::shared_ptr<const ReferenceTrajectory> trajectory_;
  DisturbanceModel regressors_;
  payload_control::Allocator allocator_;
  std::vector<payload_control::LinkSetpointTracker> trackers_;
  // Unset until the first accepted step; the reference accelerations are
  // used in the meantime.
  std::optional<Vec3> x0_ddot_;
  Vec3 Omega0_dot_ = Vec3::Zero();
};

}  // namespace cooplift
