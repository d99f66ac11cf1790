#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cooplift/record.hpp"
#include "cooplift/scenario.hpp"

namespace cooplift {

struct RunOptions {
  bool keep_records = false;  // fill RunLog::records
  bool lyapunov = false;      // evaluate the Lyapunov diagnostic each step
  std::optional<ModelMode> model;
  std::optional<double> dt;
  std::optional<double> t_final;
};

/// One logged sample.
struct LogRow {
  double t = 0.0;
  Vec3 x0 = Vec3::Zero();
  Vec3 e_x0 = Vec3::Zero();
  double psi0_trace = 0.0;  // 0.5 tr(I - R0d^T R0)
  double psi0_frob = 0.0;   // 0.5 |R0 - R0d|_F^2
  std::vector<double> psi_q;
  std::vector<double> psi_i;    // quadrotor attitude error, trace form
  std::vector<double> tension;  // |mu_i|
  std::vector<double> thrust;   // f_i (|u_i| for the simplified model)
  std::vector<Vec3> moment;     // M_i
  double theta_x0_norm = 0.0;
  double theta_R0_norm = 0.0;
  double theta_xi_max_norm = 0.0;
  double energy = 0.0;          // T + U
  double force_error = 0.0;     // max_i |-f_i R_i e3 - u_i| (full model)
  double lyapunov = std::numeric_limits<double>::quiet_NaN();
};

/// Largest constraint violations seen over a run.
struct InvariantMaxima {
  double rotation = 0.0;  // |R^T R - I|
  double unit = 0.0;      // | |q_i| - 1 |
  double tangent = 0.0;   // |q_i . omega_i|

  void observe(const SystemState& state);
  void merge(const InvariantMaxima& other);
};

struct RunLog {
  std::string scenario;
  ModelMode model = ModelMode::Simplified;
  std::size_t n = 0;
  double dt = 0.0;
  double bound_theta = 0.0;
  std::vector<LogRow> rows;
  std::vector<StepRecord> records;
  InvariantMaxima invariants;
  SystemState final_state;
};

/// Closed-loop (or open-loop) simulation of a validated scenario. Numerical
/// failures are rethrown with the step index.
RunLog run(const Scenario& scenario, const RunOptions& options = {});

}  // namespace cooplift
