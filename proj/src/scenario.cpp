#include "cooplift/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "cooplift/error.hpp"

namespace cooplift {

namespace pt = boost::property_tree;

ModelMode parse_model_mode(const std::string& text) {
  if (text == "simplified") return ModelMode::Simplified;
  if (text == "full") return ModelMode::Full;
  throw Error(ErrorCode::ValidationError,
              "sim.model: expected 'simplified' or 'full', got '" + text + "'");
}

std::string to_string(ModelMode mode) {
  return mode == ModelMode::Simplified ? "simplified" : "full";
}

std::shared_ptr<const ReferenceTrajectory> TrajectorySpec::build() const {
  if (kind == TrajectoryKind::Hover) {
    return std::make_shared<HoverTrajectory>(hover_position, hover_attitude);
  }
  return std::make_shared<Figure8Trajectory>(shape);
}

void Scenario::validate() const {
  cooplift::validate(params);
  cooplift::validate(disturbance, params.n());
  cooplift::validate(initial, params.n());
  payload_gains.validate();
  attitude_gains.validate();
  integrator.validate();
  if (!(t_final > 0.0) || !std::isfinite(t_final)) {
    throw Error(ErrorCode::ValidationError, "sim.t_final: must be > 0");
  }
  if (model == ModelMode::Full && integrator.dt > kMaxFullModelStep) {
    throw Error(ErrorCode::ValidationError,
                "sim.dt: full model needs dt <= 1e-2 s");
  }
  for (double h : {adaptive.h_x0, adaptive.h_R0, adaptive.h_xi}) {
    if (!(h > 0.0)) {
      throw Error(ErrorCode::ValidationError, "gains.h: adaptive gains must be > 0");
    }
  }
  if (trajectory.kind == TrajectoryKind::Hover &&
      !geom::is_rotation(trajectory.hover_attitude)) {
    throw Error(ErrorCode::ValidationError, "trajectory.attitude: not a rotation");
  }
}

namespace {

[[noreturn]] void parse_fail(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::ParseError, field + ": " + why);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& text, const std::string& field) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    parse_fail(field, "not a number: '" + t + "'");
  }
  if (used != t.size()) parse_fail(field, "not a number: '" + t + "'");
  return v;
}

std::vector<double> to_list(const std::string& text, const std::string& field) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(item, field));
  return out;
}

bool to_bool(const std::string& text, const std::string& field) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  parse_fail(field, "expected true or false, got '" + t + "'");
}

// A section of the INI tree together with its dotted name for messages.
class Section {
 public:
  Section(const pt::ptree* node, std::string name)
      : node_(node), name_(std::move(name)) {}

  bool has(const std::string& key) const {
    return node_ && node_->get_child_optional(pt::ptree::path_type(key, '/'));
  }

  std::string field(const std::string& key) const { return name_ + "." + key; }

  std::string raw(const std::string& key) const {
    return node_->get<std::string>(pt::ptree::path_type(key, '/'));
  }

  void require(const std::string& key) const {
    if (!has(key)) {
      throw Error(ErrorCode::ValidationError, field(key) + ": missing");
    }
  }

  void number(const std::string& key, double& out) const {
    if (has(key)) out = to_double(raw(key), field(key));
  }

  void flag(const std::string& key, bool& out) const {
    if (has(key)) out = to_bool(raw(key), field(key));
  }

  void vec3(const std::string& key, Vec3& out) const {
    if (!has(key)) return;
    const auto v = to_list(raw(key), field(key));
    if (v.size() != 3) parse_fail(field(key), "expected 3 values");
    out = Vec3(v[0], v[1], v[2]);
  }

  void vecx(const std::string& key, VecX& out) const {
    if (!has(key)) return;
    const auto v = to_list(raw(key), field(key));
    out = Eigen::Map<const VecX>(v.data(), static_cast<Eigen::Index>(v.size()));
  }

  // 9 row-major entries, or 3 for a diagonal.
  void mat3(const std::string& key, Mat3& out) const {
    if (!has(key)) return;
    const auto v = to_list(raw(key), field(key));
    if (v.size() == 3) {
      out = Vec3(v[0], v[1], v[2]).asDiagonal();
    } else if (v.size() == 9) {
      out = Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(v.data());
    } else {
      parse_fail(field(key), "expected 9 row-major values or 3 diagonal values");
    }
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    return has(key) ? trim(raw(key)) : fallback;
  }

 private:
  const pt::ptree* node_;
  std::string name_;
};

Section section(const pt::ptree& root, const std::string& name) {
  const auto child = root.get_child_optional(pt::ptree::path_type(name, '/'));
  return Section(child ? &*child : nullptr, name);
}

Regressor parse_regressor(const Section& s) {
  Regressor reg;
  const std::string kind = s.text("regressor", "constant");
  if (kind == "constant") {
    reg.kind = RegressorKind::Constant;
  } else if (kind == "harmonic") {
    reg.kind = RegressorKind::TimeHarmonic;
    s.number("frequency", reg.frequency);
  } else {
    throw Error(ErrorCode::ValidationError, s.field("regressor") +
                                                ": expected 'constant' or 'harmonic'");
  }
  return reg;
}

}  // namespace

Scenario parse_scenario(std::istream& in, const std::string& name) {
  pt::ptree root;
  try {
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }

  Scenario sc;
  sc.name = name;

  const Section payload = section(root, "payload");
  payload.require("mass");
  payload.require("inertia");
  payload.number("mass", sc.params.payload_mass);
  payload.mat3("inertia", sc.params.payload_inertia);

  const Section sim = section(root, "sim");
  sim.number("gravity", sc.params.gravity);
  sim.number("dt", sc.integrator.dt);
  sim.number("t_final", sc.t_final);
  sc.model = parse_model_mode(sim.text("model", "simplified"));
  sim.flag("closed_loop", sc.closed_loop);
  const std::string scheme = sim.text("scheme", "rk4");
  if (scheme == "rk4") {
    sc.integrator.scheme = Scheme::RK4;
  } else if (scheme == "euler") {
    sc.integrator.scheme = Scheme::Euler;
  } else {
    throw Error(ErrorCode::ValidationError, "sim.scheme: expected 'rk4' or 'euler'");
  }

  std::vector<Section> quads;
  for (std::size_t i = 1;; ++i) {
    Section q = section(root, "quadrotor." + std::to_string(i));
    if (!root.get_child_optional(
            pt::ptree::path_type("quadrotor." + std::to_string(i), '/'))) {
      break;
    }
    quads.push_back(q);
  }
  const std::size_t n = quads.size();
  sc.params.quads.resize(n);
  sc.initial.quads.resize(n);

  const Section dist = section(root, "disturbance");
  const Regressor reg = parse_regressor(dist);
  sc.disturbance.phi_x0 = sc.disturbance.phi_R0 = reg;
  sc.disturbance.phi_xi = sc.disturbance.phi_Ri = reg;
  const VecX zero = VecX::Zero(reg.arity());
  sc.disturbance.theta_x0 = sc.disturbance.theta_R0 = zero;
  VecX theta_x = zero;
  VecX theta_R = zero;
  dist.vecx("theta_x0", sc.disturbance.theta_x0);
  dist.vecx("theta_R0", sc.disturbance.theta_R0);
  dist.vecx("theta_xi", theta_x);
  dist.vecx("theta_Ri", theta_R);
  sc.disturbance.bound_phi = reg.norm_bound();
  dist.number("bound_phi", sc.disturbance.bound_phi);
  dist.number("bound_theta", sc.disturbance.bound_theta);
  sc.disturbance.theta_xi.assign(n, theta_x);
  sc.disturbance.theta_Ri.assign(n, theta_R);

  for (std::size_t i = 0; i < n; ++i) {
    const Section& q = quads[i];
    auto& qp = sc.params.quads[i];
    for (const char* key : {"mass", "inertia", "rho", "length"}) q.require(key);
    q.number("mass", qp.mass);
    q.mat3("inertia", qp.inertia);
    q.vec3("rho", qp.attachment);
    q.number("length", qp.link_length);
    q.vecx("theta_x", sc.disturbance.theta_xi[i]);
    q.vecx("theta_R", sc.disturbance.theta_Ri[i]);

    auto& qs = sc.initial.quads[i];
    q.vec3("q0", qs.q);
    q.vec3("omega0", qs.omega);
    q.mat3("R0", qs.R);
    q.vec3("Omega0", qs.Omega);
  }

  const Section init = section(root, "initial");
  init.vec3("x0", sc.initial.x0);
  init.vec3("v0", sc.initial.v0);
  init.mat3("R0", sc.initial.R0);
  init.vec3("Omega0", sc.initial.Omega0);

  const Section gains = section(root, "gains");
  auto& pg = sc.payload_gains;
  gains.number("k_x0", pg.k_x);
  gains.number("k_v0", pg.k_v);
  gains.number("k_R0", pg.k_R);
  gains.number("k_Omega0", pg.k_Omega);
  gains.number("k_q", pg.k_q);
  gains.number("k_omega", pg.k_omega);
  gains.number("c_x", pg.c_x);
  gains.number("c_R", pg.c_R);
  gains.number("c_q", pg.c_q);
  gains.number("link_bandwidth", pg.setpoint_bandwidth);
  auto& ag = sc.attitude_gains;
  gains.number("k_R", ag.k_R);
  gains.number("l_R", ag.l_R);
  gains.number("k_s", ag.k_s);
  gains.number("l_s", ag.l_s);
  gains.number("r", ag.r);
  gains.number("attitude_bandwidth", ag.setpoint_bandwidth);
  gains.flag("robust", ag.robust);
  ag.B_delta = sc.disturbance.bound_phi * sc.disturbance.bound_theta;
  gains.number("B_delta", ag.B_delta);
  gains.number("robust_eps", ag.robust_eps);
  gains.flag("adaptive", sc.adaptive.enabled);
  gains.number("h_x0", sc.adaptive.h_x0);
  gains.number("h_R0", sc.adaptive.h_R0);
  gains.number("h_xi", sc.adaptive.h_xi);

  const Section traj = section(root, "trajectory");
  const std::string type = traj.text("type", "figure8");
  if (type == "figure8") {
    sc.trajectory.kind = TrajectoryKind::Figure8;
    auto& sh = sc.trajectory.shape;
    traj.number("ax", sh.ax);
    traj.number("wx", sh.wx);
    traj.number("ay", sh.ay);
    traj.number("wy", sh.wy);
    traj.number("z", sh.z);
  } else if (type == "hover") {
    sc.trajectory.kind = TrajectoryKind::Hover;
    traj.vec3("position", sc.trajectory.hover_position);
    traj.mat3("attitude", sc.trajectory.hover_attitude);
  } else {
    throw Error(ErrorCode::ValidationError,
                "trajectory.type: expected 'figure8' or 'hover'");
  }

  sc.validate();
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::string name = path;
  const auto slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  const auto dot = name.find_last_of('.');
  if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
  return parse_scenario(in, name);
}

Scenario figure8_scenario() {
  Scenario sc;
  sc.name = "figure8";
  sc.params.payload_mass = 1.5;
  // Uniform 1.0 x 0.8 x 0.2 m box.
  const double m0 = 1.5;
  sc.params.payload_inertia =
      Vec3(m0 / 12.0 * (0.8 * 0.8 + 0.2 * 0.2), m0 / 12.0 * (1.0 * 1.0 + 0.2 * 0.2),
           m0 / 12.0 * (1.0 * 1.0 + 0.8 * 0.8))
          .asDiagonal();
  const std::vector<Vec3> rho = {
      {0.5, 0.0, -0.1}, {-0.5, 0.4, -0.1}, {-0.5, -0.4, -0.1}};
  for (const auto& r : rho) {
    QuadParams qp;
    qp.mass = 0.755;
    qp.inertia = Vec3(0.0820, 0.0845, 0.1377).asDiagonal();
    qp.attachment = r;
    qp.link_length = 1.0;
    sc.params.quads.push_back(qp);
  }

  auto& d = sc.disturbance;
  d.theta_x0 = Vec3(1.0, 3.0, -2.5);
  d.theta_R0 = Vec3(-0.5, 0.1, -1.5);
  d.theta_xi.assign(3, Vec3(0.5, -0.2, 0.3));
  d.theta_Ri.assign(3, Vec3(0.2, 0.3, -0.7));
  d.bound_phi = 1.0;
  d.bound_theta = 5.0;

  sc.initial.x0 = Vec3(1.0, 4.8, 0.0);
  sc.initial.quads.assign(3, QuadState{});

  sc.attitude_gains.B_delta = d.bound_phi * d.bound_theta;
  sc.trajectory.kind = TrajectoryKind::Figure8;
  sc.integrator.dt = 1e-3;
  sc.t_final = 20.0;
  return sc;
}

}  // namespace cooplift
