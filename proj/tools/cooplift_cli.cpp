// Command-line runner: simulate a scenario or run a verification suite.

#include <chrono>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "cooplift/checks.hpp"
#include "cooplift/error.hpp"
#include "cooplift/output.hpp"
#include "cooplift/scenario.hpp"
#include "cooplift/simulation.hpp"
#include "cooplift/verification.hpp"

namespace {

using namespace cooplift;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

int exit_code(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ParseError:
    case ErrorCode::ValidationError:
    case ErrorCode::RankDeficient:
    case ErrorCode::IoError:
      return kExitValidation;
    default:
      return kExitNumerical;
  }
}

void report(const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
}

bool verify_energy(const Scenario& sc) {
  const auto r = checks::energy_conservation(sc, 5.0, 1e-3, 7);
  const bool ok = r.max_relative_drift < 1e-5;
  std::ostringstream os;
  os << "max |E - E0|/|E0| = " << r.max_relative_drift << ", E0 = " << r.initial_energy
     << " J";
  report("energy", ok, os.str());
  return ok;
}

bool verify_allocation(const Scenario& sc) {
  const auto r = checks::allocation_exactness(sc.params, 1000, 11);
  const bool ok = r.max_residual < 1e-10 && r.max_norm_gap < 1e-9;
  std::ostringstream os;
  os << "residual " << r.max_residual << ", norm gap " << r.max_norm_gap;
  report("allocation", ok, os.str());
  return ok;
}

bool verify_lyapunov(const Scenario& sc) {
  RunOptions opt;
  opt.lyapunov = true;
  opt.model = ModelMode::Simplified;
  const RunLog log = run(sc, opt);
  const double rise = checks::lyapunov_max_increase(log, 1.0);
  const bool ok = rise <= 1e-6;
  std::ostringstream os;
  os << "max step increase after 1 s = " << rise << " V(0), V(0) = "
     << log.rows.front().lyapunov << ", V(t_f) = " << log.rows.back().lyapunov;
  report("lyapunov", ok, os.str());
  return ok;
}

bool verify_attitude(const Scenario& sc) {
  const auto& gains = sc.attitude_gains;
  const Mat3& J = sc.params.quads.front().inertia;
  // Psi = 1 - cos(angle) = 0.5
  const Mat3 R0 = geom::rotation(Vec3(1.0, 1.0, 1.0).normalized(), std::acos(0.5));
  const double dt = 1e-4;
  const auto s0 = attitude_control::moment_command(R0, Vec3::Zero(), J, Mat3::Identity(),
                                                   Vec3::Zero(), Vec3::Zero(), gains);
  const double W0 = 0.5 * s0.s.dot(J * s0.s);
  const double T_s = verification::sliding_settling_bound(gains, J, W0);
  const double T_R = verification::attitude_settling_bound(gains, 0.6, 0.5);
  const auto trace = checks::attitude_experiment(gains, J, R0, Mat3::Identity(), dt,
                                                 T_s + T_R + 0.5);
  double t_s = -1.0;
  double t_R = -1.0;
  for (std::size_t k = trace.t.size(); k-- > 0;) {
    if (t_s < 0.0 && trace.s_norm[k] >= 1e-6) t_s = trace.t[k] + dt;
    if (t_R < 0.0 && trace.e_R_norm[k] >= 1e-6) t_R = trace.t[k] + dt;
  }
  const bool ok = t_s <= T_s && t_R <= T_s + T_R;
  std::ostringstream os;
  os << "|s| < 1e-6 from " << t_s << " s (bound " << T_s << "), |e_R| < 1e-6 from "
     << t_R << " s (bound " << T_s + T_R << ")";
  report("attitude", ok, os.str());
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative payload transport simulator"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  std::string model;
  std::optional<double> dt;
  std::optional<double> tf;
  bool lyapunov = false;
  auto* simulate = app.add_subcommand("simulate", "Run a scenario and write outputs");
  simulate->add_option("--config", config, "Scenario file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out", out_dir, "Output directory")->required();
  simulate->add_option("--model", model, "simplified or full")
      ->check(CLI::IsMember({"simplified", "full"}));
  simulate->add_option("--dt", dt, "Step size [s]");
  simulate->add_option("--tf", tf, "Final time [s]");
  simulate->add_flag("--lyapunov", lyapunov, "Also write lyapunov.csv");

  std::string suite;
  std::string verify_config;
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("--suite", suite, "Suite name")
      ->required()
      ->check(CLI::IsMember({"energy", "allocation", "lyapunov", "attitude"}));
  verify->add_option("--config", verify_config, "Scenario file")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*simulate) {
      const Scenario sc = load_scenario(config);
      RunOptions opt;
      if (!model.empty()) opt.model = parse_model_mode(model);
      opt.dt = dt;
      opt.t_final = tf;
      opt.lyapunov = lyapunov;
      const auto start = std::chrono::steady_clock::now();
      const RunLog log = run(sc, opt);
      output::write_outputs(log, out_dir);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      const auto& last = log.rows.back();
      std::cout << sc.name << " (" << to_string(log.model) << "): " << log.rows.size() - 1
                << " steps in " << secs << " s, |e_x0(t_f)| = " << last.e_x0.norm()
                << " m, psi0(t_f) = " << last.psi0_trace << "\n";
      return kExitOk;
    }
    const Scenario sc = load_scenario(verify_config);
    bool ok = false;
    if (suite == "energy") ok = verify_energy(sc);
    if (suite == "allocation") ok = verify_allocation(sc);
    if (suite == "lyapunov") ok = verify_lyapunov(sc);
    if (suite == "attitude") ok = verify_attitude(sc);
    return ok ? kExitOk : kExitCheckFailed;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e);
  }
}
