#include "cooplift/integrator.hpp"

#include <cmath>
#include <string>

#include "cooplift/error.hpp"

namespace cooplift {

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::ValidationError, "sim.dt: must be > 0");
  }
}

namespace integrator {
namespace {

// Lie-algebra coordinates of a displacement from the base state.
struct Increment {
  Vec3 x0 = Vec3::Zero();
  Vec3 v0 = Vec3::Zero();
  Vec3 R0 = Vec3::Zero();
  Vec3 Omega0 = Vec3::Zero();
  struct Quad {
    Vec3 q = Vec3::Zero();
    Vec3 omega = Vec3::Zero();
    Vec3 R = Vec3::Zero();
    Vec3 Omega = Vec3::Zero();
  };
  std::vector<Quad> quads;

  explicit Increment(std::size_t n) : quads(n) {}
};

Increment combine(double a, const Increment& A, double b, const Increment& B) {
  Increment out(A.quads.size());
  out.x0 = a * A.x0 + b * B.x0;
  out.v0 = a * A.v0 + b * B.v0;
  out.R0 = a * A.R0 + b * B.R0;
  out.Omega0 = a * A.Omega0 + b * B.Omega0;
  for (std::size_t i = 0; i < A.quads.size(); ++i) {
    out.quads[i].q = a * A.quads[i].q + b * B.quads[i].q;
    out.quads[i].omega = a * A.quads[i].omega + b * B.quads[i].omega;
    out.quads[i].R = a * A.quads[i].R + b * B.quads[i].R;
    out.quads[i].Omega = a * A.quads[i].Omega + b * B.quads[i].Omega;
  }
  return out;
}

Increment scaled(double a, const Increment& A) { return combine(a, A, 0.0, A); }

// Body-frame increment: R = R_base exp(theta).
Vec3 dexpinv_body(const Vec3& theta, const Vec3& w) {
  const Vec3 tw = theta.cross(w);
  return w + 0.5 * tw + theta.cross(tw) / 12.0;
}

// Spatial increment: q = exp(theta) q_base.
Vec3 dexpinv_spatial(const Vec3& theta, const Vec3& w) {
  const Vec3 tw = theta.cross(w);
  return w - 0.5 * tw + theta.cross(tw) / 12.0;
}

SystemState apply(const SystemState& base, const Increment& d) {
  SystemState s = base;
  s.x0 += d.x0;
  s.v0 += d.v0;
  s.R0 = base.R0 * geom::exp_so3(d.R0);
  s.Omega0 += d.Omega0;
  for (std::size_t i = 0; i < s.quads.size(); ++i) {
    auto& qs = s.quads[i];
    const auto& di = d.quads[i];
    qs.q = geom::exp_so3(di.q) * base.quads[i].q;
    qs.omega += di.omega;
    qs.R = base.quads[i].R * geom::exp_so3(di.R);
    qs.Omega += di.Omega;
  }
  return s;
}

Increment rates(const StateDerivative& f, const Increment& at) {
  Increment k(at.quads.size());
  if (f.quads.size() != at.quads.size()) {
    throw Error(ErrorCode::ArityMismatch,
                "derivative has " + std::to_string(f.quads.size()) +
                    " quadrotors, state has " + std::to_string(at.quads.size()));
  }
  k.x0 = f.x_dot;
  k.v0 = f.v_dot;
  k.R0 = dexpinv_body(at.R0, f.R0_rate);
  k.Omega0 = f.Omega0_dot;
  for (std::size_t i = 0; i < at.quads.size(); ++i) {
    const auto& fi = f.quads[i];
    k.quads[i].q = dexpinv_spatial(at.quads[i].q, fi.q_rate);
    k.quads[i].omega = fi.omega_dot;
    k.quads[i].R = dexpinv_body(at.quads[i].R, fi.R_rate);
    k.quads[i].Omega = fi.Omega_dot;
  }
  return k;
}

bool finite(const SystemState& s) {
  bool ok = s.x0.allFinite() && s.v0.allFinite() && s.R0.allFinite() &&
            s.Omega0.allFinite();
  for (const auto& q : s.quads) {
    ok = ok && q.q.allFinite() && q.omega.allFinite() && q.R.allFinite() &&
         q.Omega.allFinite();
  }
  return ok;
}

}  // namespace

void retract(SystemState& state) {
  state.R0 = geom::orthonormalize(state.R0);
  for (auto& qs : state.quads) {
    qs.q.normalize();
    qs.omega -= qs.q * qs.q.dot(qs.omega);
    qs.R = geom::orthonormalize(qs.R);
  }
}

SystemState step(const SystemState& state, const DerivativeFn& f, double t,
                 double dt, Scheme scheme) {
  const std::size_t n = state.quads.size();
  const Increment zero(n);
  Increment total(n);

  const Increment k1 = rates(f(t, state), zero);
  if (scheme == Scheme::Euler) {
    total = scaled(dt, k1);
  } else {
    const Increment d2 = scaled(0.5 * dt, k1);
    const Increment k2 = rates(f(t + 0.5 * dt, apply(state, d2)), d2);
    const Increment d3 = scaled(0.5 * dt, k2);
    const Increment k3 = rates(f(t + 0.5 * dt, apply(state, d3)), d3);
    const Increment d4 = scaled(dt, k3);
    const Increment k4 = rates(f(t + dt, apply(state, d4)), d4);
    total = combine(dt / 6.0, combine(1.0, k1, 1.0, k4), dt / 3.0,
                    combine(1.0, k2, 1.0, k3));
  }

  SystemState next = apply(state, total);
  if (!finite(next)) {
    throw Error(ErrorCode::NumericalFailure, "non-finite state after step");
  }
  retract(next);
  return next;
}

}  // namespace integrator
}  // namespace cooplift
