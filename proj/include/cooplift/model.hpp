#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cooplift/geom.hpp"

namespace cooplift {

using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

struct QuadParams {
  double mass = 0.0;              // kg
  Mat3 inertia = Mat3::Zero();    // kg m^2, body frame
  Vec3 attachment = Vec3::Zero(); // rho_i, payload body frame, m
  double link_length = 0.0;       // m
};

struct SystemParams {
  double payload_mass = 0.0;            // kg
  Mat3 payload_inertia = Mat3::Zero();  // kg m^2
  std::vector<QuadParams> quads;
  double gravity = 9.81;                // m/s^2, e3 points down

  std::size_t n() const { return quads.size(); }
  double total_mass() const;
};

struct QuadState {
  Vec3 q = kE3;                     // link direction, quadrotor -> payload
  Vec3 omega = Vec3::Zero();        // link angular velocity, q . omega = 0
  Mat3 R = Mat3::Identity();        // quadrotor attitude
  Vec3 Omega = Vec3::Zero();        // quadrotor body rate
};

struct SystemState {
  Vec3 x0 = Vec3::Zero();
  Vec3 v0 = Vec3::Zero();
  Mat3 R0 = Mat3::Identity();
  Vec3 Omega0 = Vec3::Zero();
  std::vector<QuadState> quads;
};

/// Named regressor forms Phi(t, q, qdot).
enum class RegressorKind {
  Constant,      // Phi = I3, n_theta = 3
  TimeHarmonic,  // Phi = [I3, sin(nu t) I3], n_theta = 6
};

struct Regressor {
  RegressorKind kind = RegressorKind::Constant;
  double frequency = 0.0;  // nu, rad/s (TimeHarmonic only)

  int arity() const;
  Eigen::Matrix<double, 3, Eigen::Dynamic> matrix(double t,
                                                  const SystemState& state) const;
  /// Upper bound of ||Phi||_2 over all t.
  double norm_bound() const;
};

struct DisturbanceModel {
  Regressor phi_x0;
  Regressor phi_R0;
  Regressor phi_xi;
  Regressor phi_Ri;
  VecX theta_x0;
  VecX theta_R0;
  std::vector<VecX> theta_xi;
  std::vector<VecX> theta_Ri;
  double bound_phi = 1.0;    // B_Phi
  double bound_theta = 1.0;  // B_theta

  int n_theta() const { return phi_x0.arity(); }

  /// All-zero parameters with Constant regressors for n quadrotors.
  static DisturbanceModel zero(std::size_t n, double bound_theta = 1.0);
};

/// Evaluated disturbance forces (inertial) and moments (body frames).
struct Disturbances {
  Vec3 force0 = Vec3::Zero();
  Vec3 moment0 = Vec3::Zero();
  std::vector<Vec3> force;
  std::vector<Vec3> moment;
};

/// Phi(t, state) * theta; ArityMismatch when sizes disagree.
Vec3 eval_disturbance(const Regressor& spec, double t,
                      const SystemState& state, const VecX& theta);

Disturbances eval_disturbances(const DisturbanceModel& model, double t,
                               const SystemState& state);

/// P = [I ... I; hat(rho_1) ... hat(rho_n)], 6 x 3n.
MatX build_P(const SystemParams& params);

/// True iff lambda_min(P P^T) > 1e-9 lambda_max(P P^T).
bool check_rank(const MatX& P);

/// Throws ValidationError naming the offending field.
void validate(const SystemParams& params);
void validate(const DisturbanceModel& model, std::size_t n);
void validate(const SystemState& state, std::size_t n);

}  // namespace cooplift
