#include "cooplift/output.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "cooplift/error.hpp"

namespace cooplift::output {

namespace fs = std::filesystem;

namespace {

std::string idx(const std::string& base, std::size_t i) {
  return base + "_" + std::to_string(i + 1);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

class CsvFile {
 public:
  explicit CsvFile(const fs::path& path) : path_(path), out_(path) {
    if (!out_) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out_ << std::setprecision(12);
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  template <typename... T>
  void values(const T&... v) {
    bool first = true;
    ((out_ << (first ? "" : ",") << v, first = false), ...);
    out_ << '\n';
  }

  std::ostream& stream() { return out_; }

  void close() {
    out_.close();
    if (!out_) throw Error(ErrorCode::IoError, "failed writing " + path_.string());
  }

 private:
  fs::path path_;
  std::ofstream out_;
};

// Mean over rows with t >= t_end - window.
template <typename F>
double tail_mean(const RunLog& log, double window, F value) {
  if (log.rows.empty()) return 0.0;
  const double t_end = log.rows.back().t;
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& r : log.rows) {
    if (r.t >= t_end - window - 1e-12) {
      sum += value(r);
      ++count;
    }
  }
  return sum / static_cast<double>(count);
}

// Last time the signal was above the threshold; 0 if never, t_end + dt if it
// ends above.
template <typename F>
double settling_time(const RunLog& log, double threshold, F value) {
  double last = -1.0;
  for (const auto& r : log.rows) {
    if (value(r) > threshold) last = r.t;
  }
  if (last < 0.0) return 0.0;
  return last + log.dt;
}

}  // namespace

std::vector<std::string> timeseries_header(std::size_t n) {
  std::vector<std::string> h = {"t",      "x0_1",   "x0_2",   "x0_3",
                                "e_x0_1", "e_x0_2", "e_x0_3", "psi0"};
  for (std::size_t i = 0; i < n; ++i) h.push_back(idx("psi_q", i));
  for (std::size_t i = 0; i < n; ++i) h.push_back(idx("psi", i));
  for (std::size_t i = 0; i < n; ++i) h.push_back(idx("tension", i));
  for (std::size_t i = 0; i < n; ++i) h.push_back(idx("f", i));
  for (std::size_t i = 0; i < n; ++i) {
    for (const char* c : {"_x", "_y", "_z"}) h.push_back(idx("M", i) + c);
  }
  h.insert(h.end(), {"theta_x0_norm", "theta_R0_norm", "theta_xi_max_norm"});
  return h;
}

std::vector<std::pair<std::string, std::string>> metrics(const RunLog& log) {
  std::vector<std::pair<std::string, std::string>> m;
  const auto& last = log.rows.back();
  const auto ex = [](const LogRow& r) { return r.e_x0.norm(); };
  const auto psi_q_max = [](const LogRow& r) {
    double v = 0.0;
    for (double p : r.psi_q) v = std::max(v, p);
    return v;
  };
  const auto psi_i_max = [](const LogRow& r) {
    double v = 0.0;
    for (double p : r.psi_i) v = std::max(v, p);
    return v;
  };
  double theta_max = 0.0;
  double force_error_max = 0.0;
  for (const auto& r : log.rows) {
    theta_max = std::max({theta_max, r.theta_x0_norm, r.theta_R0_norm, r.theta_xi_max_norm});
    force_error_max = std::max(force_error_max, r.force_error);
  }

  m.emplace_back("scenario", log.scenario);
  m.emplace_back("model", to_string(log.model));
  m.emplace_back("n", std::to_string(log.n));
  m.emplace_back("dt", fmt(log.dt));
  m.emplace_back("t_final", fmt(last.t));
  m.emplace_back("steps", std::to_string(log.rows.size() - 1));
  m.emplace_back("ex0_initial", fmt(ex(log.rows.front())));
  m.emplace_back("ex0_final", fmt(ex(last)));
  m.emplace_back("ex0_mean_last2s", fmt(tail_mean(log, 2.0, ex)));
  m.emplace_back("psi0_trace_final", fmt(last.psi0_trace));
  m.emplace_back("psi0_frob_final", fmt(last.psi0_frob));
  m.emplace_back("psi0_trace_mean_last2s",
                 fmt(tail_mean(log, 2.0, [](const LogRow& r) { return r.psi0_trace; })));
  m.emplace_back("psi_q_max_mean_last2s", fmt(tail_mean(log, 2.0, psi_q_max)));
  m.emplace_back("psi_i_max_final", fmt(psi_i_max(last)));
  m.emplace_back("settling_ex0_0.05m", fmt(settling_time(log, 0.05, ex)));
  m.emplace_back("settling_psi0_0.01",
                 fmt(settling_time(log, 0.01, [](const LogRow& r) { return r.psi0_trace; })));
  m.emplace_back("theta_max_norm", fmt(theta_max));
  m.emplace_back("theta_bound", fmt(log.bound_theta));
  m.emplace_back("force_error_max", fmt(force_error_max));
  m.emplace_back("invariant_rotation_max", fmt(log.invariants.rotation));
  m.emplace_back("invariant_unit_max", fmt(log.invariants.unit));
  m.emplace_back("invariant_tangent_max", fmt(log.invariants.tangent));
  m.emplace_back("energy_final", fmt(last.energy));
  if (!std::isnan(last.lyapunov)) m.emplace_back("lyapunov_final", fmt(last.lyapunov));
  return m;
}

void write_outputs(const RunLog& log, const std::string& dir_name) {
  if (log.rows.empty()) throw Error(ErrorCode::IoError, "empty log");
  const fs::path dir(dir_name);
  std::error_code ec;
  fs::create_directories(dir / "plotdata", ec);
  if (ec) {
    throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
  }
  const std::size_t n = log.n;

  {
    CsvFile csv(dir / "timeseries.csv");
    csv.row(timeseries_header(n));
    auto& os = csv.stream();
    for (const auto& r : log.rows) {
      os << r.t << ',' << r.x0(0) << ',' << r.x0(1) << ',' << r.x0(2) << ','
         << r.e_x0(0) << ',' << r.e_x0(1) << ',' << r.e_x0(2) << ',' << r.psi0_trace;
      for (double v : r.psi_q) os << ',' << v;
      for (double v : r.psi_i) os << ',' << v;
      for (double v : r.tension) os << ',' << v;
      for (double v : r.thrust) os << ',' << v;
      for (const auto& M : r.moment) os << ',' << M(0) << ',' << M(1) << ',' << M(2);
      os << ',' << r.theta_x0_norm << ',' << r.theta_R0_norm << ','
         << r.theta_xi_max_norm << '\n';
    }
    csv.close();
  }

  {
    std::ofstream out(dir / "metrics.txt");
    if (!out) throw Error(ErrorCode::IoError, "cannot write metrics.txt");
    for (const auto& [k, v] : metrics(log)) out << k << '=' << v << '\n';
    if (!out) throw Error(ErrorCode::IoError, "failed writing metrics.txt");
  }

  const fs::path plot = dir / "plotdata";
  {
    CsvFile csv(plot / "panel_a_position.csv");
    csv.row({"t", "x0_1", "x0_2", "x0_3", "x0d_1", "x0d_2", "x0d_3"});
    for (const auto& r : log.rows) {
      const Vec3 xd = r.x0 - r.e_x0;
      csv.values(r.t, r.x0(0), r.x0(1), r.x0(2), xd(0), xd(1), xd(2));
    }
    csv.close();
  }
  {
    CsvFile csv(plot / "panel_b_payload_attitude.csv");
    csv.row({"t", "psi0_frob", "psi0_trace"});
    for (const auto& r : log.rows) {
      csv.values(r.t, r.psi0_frob, r.psi0_trace);
    }
    csv.close();
  }
  auto per_quad = [&](const std::string& file, const std::string& base, auto value) {
    CsvFile csv(plot / file);
    std::vector<std::string> h = {"t"};
    for (std::size_t i = 0; i < n; ++i) h.push_back(idx(base, i));
    csv.row(h);
    for (const auto& r : log.rows) {
      csv.stream() << r.t;
      for (std::size_t i = 0; i < n; ++i) csv.stream() << ',' << value(r, i);
      csv.stream() << '\n';
    }
    csv.close();
  };
  per_quad("panel_c_link_direction.csv", "psi_q",
           [](const LogRow& r, std::size_t i) { return r.psi_q[i]; });
  // Frobenius form 0.5 |R - R_c|^2 = 2 * trace form.
  per_quad("panel_d_quadrotor_attitude.csv", "psi_frob",
           [](const LogRow& r, std::size_t i) { return 2.0 * r.psi_i[i]; });
  per_quad("panel_e_tension.csv", "tension",
           [](const LogRow& r, std::size_t i) { return r.tension[i]; });
  {
    CsvFile csv(plot / "panel_f_inputs.csv");
    std::vector<std::string> h = {"t"};
    for (std::size_t i = 0; i < n; ++i) h.push_back(idx("f", i));
    for (std::size_t i = 0; i < n; ++i) {
      for (const char* c : {"_x", "_y", "_z"}) h.push_back(idx("M", i) + c);
    }
    csv.row(h);
    for (const auto& r : log.rows) {
      auto& os = csv.stream();
      os << r.t;
      for (double f : r.thrust) os << ',' << f;
      for (const auto& M : r.moment) os << ',' << M(0) << ',' << M(1) << ',' << M(2);
      os << '\n';
    }
    csv.close();
  }

  if (!std::isnan(log.rows.front().lyapunov)) {
    CsvFile csv(dir / "lyapunov.csv");
    csv.row({"t", "V"});
    for (const auto& r : log.rows) {
      csv.values(r.t, r.lyapunov);
    }
    csv.close();
  }
}

std::map<std::string, std::string> read_metrics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

}  // namespace cooplift::output
