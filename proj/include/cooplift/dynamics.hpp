#pragma once

#include <vector>

#include "cooplift/model.hpp"

namespace cooplift {

/// Simplified model: each quadrotor applies an arbitrary force u_i and its
/// attitude is frozen. Full model: thrust f_i along -R_i e3 plus moment M_i.
enum class InputMode { Force, ThrustMoment };

struct QuadInputs {
  InputMode mode = InputMode::Force;
  std::vector<Vec3> force;     // u_i, N (Force mode)
  std::vector<double> thrust;  // f_i, N (ThrustMoment mode)
  std::vector<Vec3> moment;    // M_i, N m (ThrustMoment mode)

  static QuadInputs zero_force(std::size_t n);
  static QuadInputs zero_thrust(std::size_t n);

  /// The force applied at quadrotor i in the inertial frame.
  Vec3 applied_force(std::size_t i, const SystemState& state) const;
};

struct QuadDerivative {
  Vec3 q_rate = Vec3::Zero();     // q_dot = q_rate x q
  Vec3 omega_dot = Vec3::Zero();
  Vec3 R_rate = Vec3::Zero();     // R_dot = R hat(R_rate)
  Vec3 Omega_dot = Vec3::Zero();

  Vec3 q_dot(const Vec3& q) const { return q_rate.cross(q); }
};

struct StateDerivative {
  Vec3 x_dot = Vec3::Zero();
  Vec3 v_dot = Vec3::Zero();
  Vec3 R0_rate = Vec3::Zero();    // R0_dot = R0 hat(R0_rate)
  Vec3 Omega0_dot = Vec3::Zero();
  std::vector<QuadDerivative> quads;
};

using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec6 = Eigen::Matrix<double, 6, 1>;

struct MassMatrix {
  Mat3 M_q;    // m0 I + sum m_i q_i q_i^T
  Mat3 C;      // -sum m_i q_i q_i^T R0 hat(rho_i)
  Mat3 J_eff;  // J0 - sum m_i hat(rho_i) R0^T q_i q_i^T R0 hat(rho_i)
  Mat6 full;   // [M_q, C; C^T, J_eff]
};

/// Throws SingularMass when cond(full) > 1e12.
MassMatrix mass_matrix(const SystemState& state, const SystemParams& params);

/// Coupled equations of motion. Throws SingularMass, ArityMismatch.
StateDerivative eom(const SystemState& state, const QuadInputs& inputs,
                    const Disturbances& dist, const SystemParams& params);

StateDerivative eom(const SystemState& state, const QuadInputs& inputs,
                    const DisturbanceModel& dist, double t,
                    const SystemParams& params);

struct Energy {
  double kinetic = 0.0;
  double potential = 0.0;
  double total() const { return kinetic + potential; }
};

Energy energy(const SystemState& state, const SystemParams& params);

/// x_i = x0 + R0 rho_i - l_i q_i.
std::vector<Vec3> quad_positions(const SystemState& state,
                                 const SystemParams& params);

/// x_i_dot = v0 + R0 hat(Omega0) rho_i - l_i q_i_dot.
std::vector<Vec3> quad_velocities(const SystemState& state,
                                  const SystemParams& params);

/// Rate of work done by inputs and disturbances; equals d/dt (T + U).
double input_power(const SystemState& state, const QuadInputs& inputs,
                   const Disturbances& dist, const SystemParams& params);

}  // namespace cooplift
