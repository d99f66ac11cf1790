#pragma once

#include <cstdint>
#include <vector>

#include "cooplift/simulation.hpp"

namespace cooplift::checks {

/// Open-loop run with zero inputs, zero disturbances and random bounded
/// initial velocities (full model, so quadrotor attitudes evolve freely).
struct EnergyResult {
  double max_relative_drift = 0.0;
  double initial_energy = 0.0;
  InvariantMaxima invariants;
};

SystemState random_initial_state(const Scenario& base, std::uint64_t seed);

EnergyResult energy_conservation(const Scenario& base, double horizon, double dt,
                                 std::uint64_t seed);

/// Random wrenches and payload attitudes pushed through the allocator and
/// compared with an SVD least-squares solve.
struct AllocationResult {
  double max_residual = 0.0;   // |P mu - [R0^T F; M]| / |[R0^T F; M]|
  double max_norm_gap = 0.0;   // | |mu| - |mu_svd| | / |mu_svd|
  double max_vector_gap = 0.0; // |mu - mu_svd| / |mu_svd|
};

AllocationResult allocation_exactness(const SystemParams& params, int samples,
                                      std::uint64_t seed);

/// Largest per-step increase V(t_{k+1}) - V(t_k) for t_k >= t_start,
/// divided by V(0). Needs a run with the Lyapunov diagnostic.
double lyapunov_max_increase(const RunLog& log, double t_start);

/// Single quadrotor attitude loop with a constant command. The moment is
/// re-evaluated at every integrator stage (continuous closed loop).
struct AttitudeTrace {
  std::vector<double> t;
  std::vector<double> s_norm;
  std::vector<double> e_R_norm;
  std::vector<double> psi;
  std::vector<double> W;  // 0.5 s.J s
  InvariantMaxima invariants;
};

AttitudeTrace attitude_experiment(const AttitudeGains& gains, const Mat3& J,
                                  const Mat3& R_init, const Mat3& R_c, double dt,
                                  double horizon);

/// Final state of an open-loop run (zero inputs, scenario disturbances).
SystemState open_loop_final(const Scenario& base, double dt, double horizon,
                            Scheme scheme = Scheme::RK4);

/// Combined distance over positions, velocities, rotations (via the group
/// logarithm) and link directions.
double state_distance(const SystemState& a, const SystemState& b);

}  // namespace cooplift::checks
