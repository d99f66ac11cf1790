#include "cooplift/model.hpp"

#include <cmath>
#include <sstream>

#include "cooplift/error.hpp"

namespace cooplift {

double SystemParams::total_mass() const {
  double m = payload_mass;
  for (const auto& quad : quads) m += quad.mass;
  return m;
}

int Regressor::arity() const {
  return kind == RegressorKind::Constant ? 3 : 6;
}

Eigen::Matrix<double, 3, Eigen::Dynamic> Regressor::matrix(
    double t, const SystemState& /*state*/) const {
  Eigen::Matrix<double, 3, Eigen::Dynamic> phi(3, arity());
  phi.leftCols<3>() = Mat3::Identity();
  if (kind == RegressorKind::TimeHarmonic) {
    phi.rightCols<3>() = std::sin(frequency * t) * Mat3::Identity();
  }
  return phi;
}

double Regressor::norm_bound() const {
  return kind == RegressorKind::Constant ? 1.0 : std::sqrt(2.0);
}

DisturbanceModel DisturbanceModel::zero(std::size_t n, double bound_theta) {
  DisturbanceModel model;
  model.theta_x0 = VecX::Zero(3);
  model.theta_R0 = VecX::Zero(3);
  model.theta_xi.assign(n, VecX::Zero(3));
  model.theta_Ri.assign(n, VecX::Zero(3));
  model.bound_phi = 1.0;
  model.bound_theta = bound_theta;
  return model;
}

Vec3 eval_disturbance(const Regressor& spec, double t,
                      const SystemState& state, const VecX& theta) {
  if (theta.size() != spec.arity()) {
    std::ostringstream os;
    os << "regressor expects " << spec.arity() << " parameters, got "
       << theta.size();
    throw Error(ErrorCode::ArityMismatch, os.str());
  }
  if (spec.kind == RegressorKind::Constant) return theta.head<3>();
  return spec.matrix(t, state) * theta;
}

Disturbances eval_disturbances(const DisturbanceModel& model, double t,
                               const SystemState& state) {
  Disturbances d;
  d.force0 = eval_disturbance(model.phi_x0, t, state, model.theta_x0);
  d.moment0 = eval_disturbance(model.phi_R0, t, state, model.theta_R0);
  const std::size_t n = state.quads.size();
  d.force.resize(n);
  d.moment.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    d.force[i] = eval_disturbance(model.phi_xi, t, state, model.theta_xi[i]);
    d.moment[i] = eval_disturbance(model.phi_Ri, t, state, model.theta_Ri[i]);
  }
  return d;
}

MatX build_P(const SystemParams& params) {
  const auto n = static_cast<Eigen::Index>(params.n());
  MatX P = MatX::Zero(6, 3 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    P.block<3, 3>(0, 3 * i) = Mat3::Identity();
    P.block<3, 3>(3, 3 * i) = geom::hat(params.quads[i].attachment);
  }
  return P;
}

bool check_rank(const MatX& P) {
  if (P.rows() != 6 || P.cols() == 0) return false;
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> eig(
      P * P.transpose(), Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  return ev.maxCoeff() > 0.0 && ev.minCoeff() > 1e-9 * ev.maxCoeff();
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::ValidationError, field + ": " + why);
}

void check_inertia(const Mat3& J, const std::string& field) {
  if (!J.allFinite()) fail(field, "non-finite entries");
  if ((J - J.transpose()).norm() > 1e-12 * std::max(1.0, J.norm())) {
    fail(field, "not symmetric");
  }
  const Eigen::SelfAdjointEigenSolver<Mat3> eig(J, Eigen::EigenvaluesOnly);
  if (!(eig.eigenvalues().minCoeff() > 0.0)) fail(field, "not positive-definite");
}

}  // namespace

void validate(const SystemParams& params) {
  if (!(params.payload_mass > 0.0)) fail("payload.mass", "must be > 0");
  check_inertia(params.payload_inertia, "payload.inertia");
  if (!(params.gravity >= 0.0)) fail("sim.gravity", "must be >= 0");
  if (params.n() < 3) {
    std::ostringstream os;
    os << "n = " << params.n()
       << " quadrotors; rank condition rank[P] >= 6 needs n >= 3";
    fail("quadrotor", os.str());
  }
  for (std::size_t i = 0; i < params.n(); ++i) {
    const std::string prefix = "quadrotor." + std::to_string(i + 1) + ".";
    const auto& quad = params.quads[i];
    if (!(quad.mass > 0.0)) fail(prefix + "mass", "must be > 0");
    check_inertia(quad.inertia, prefix + "inertia");
    if (!(quad.link_length > 0.0)) fail(prefix + "length", "must be > 0");
    if (!quad.attachment.allFinite()) fail(prefix + "rho", "non-finite");
  }
  if (!check_rank(build_P(params))) {
    fail("quadrotor.rho", "attachment geometry violates rank[P] >= 6");
  }
}

void validate(const DisturbanceModel& model, std::size_t n) {
  const int n_theta = model.n_theta();
  const auto check_channel = [&](const Regressor& reg, const VecX& theta,
                                 const std::string& field) {
    if (reg.arity() != n_theta) {
      fail(field, "regressor arity differs from n_theta = " +
                      std::to_string(n_theta));
    }
    if (theta.size() != n_theta) {
      fail(field, "expected " + std::to_string(n_theta) + " parameters, got " +
                      std::to_string(theta.size()));
    }
    if (!(theta.norm() < model.bound_theta)) {
      fail(field, "||theta|| must be < B_theta");
    }
    if (!(reg.norm_bound() <= model.bound_phi)) {
      fail(field, "||Phi|| bound must be < B_Phi");
    }
  };
  if (!(model.bound_theta > 0.0)) fail("disturbance.B_theta", "must be > 0");
  check_channel(model.phi_x0, model.theta_x0, "disturbance.theta_x0");
  check_channel(model.phi_R0, model.theta_R0, "disturbance.theta_R0");
  if (model.theta_xi.size() != n || model.theta_Ri.size() != n) {
    fail("disturbance.theta_xi", "one parameter vector per quadrotor required");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::string idx = std::to_string(i + 1);
    check_channel(model.phi_xi, model.theta_xi[i],
                  "quadrotor." + idx + ".theta_x");
    check_channel(model.phi_Ri, model.theta_Ri[i],
                  "quadrotor." + idx + ".theta_R");
  }
}

void validate(const SystemState& state, std::size_t n) {
  if (state.quads.size() != n) {
    fail("initial", "state has " + std::to_string(state.quads.size()) +
                        " quadrotors, expected " + std::to_string(n));
  }
  if (!geom::is_rotation(state.R0)) fail("initial.R0", "not a rotation");
  for (std::size_t i = 0; i < n; ++i) {
    const std::string prefix = "quadrotor." + std::to_string(i + 1) + ".";
    const auto& quad = state.quads[i];
    if (!geom::is_unit(quad.q)) fail(prefix + "q0", "not a unit vector");
    if (std::abs(quad.q.dot(quad.omega)) > geom::kLinkConstraintTolerance) {
      fail(prefix + "omega0", "must be perpendicular to q0");
    }
    if (!geom::is_rotation(quad.R)) fail(prefix + "R0", "not a rotation");
  }
}

}  // namespace cooplift
