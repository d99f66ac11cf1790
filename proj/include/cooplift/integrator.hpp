#pragma once

#include <functional>

#include "cooplift/dynamics.hpp"

namespace cooplift {

enum class Scheme { RK4, Euler };

struct IntegratorConfig {
  double dt = 1e-3;  // s
  Scheme scheme = Scheme::RK4;

  void validate() const;
};

using DerivativeFn = std::function<StateDerivative(double t, const SystemState&)>;

namespace integrator {

/// One fixed step. Rotations move by exponential-map increments in their
/// Lie algebra (Munthe-Kaas form of RK4), link directions are rotated and
/// renormalized, and link rates are re-projected onto the tangent plane.
SystemState step(const SystemState& state, const DerivativeFn& f, double t,
                 double dt, Scheme scheme = Scheme::RK4);

inline SystemState step(const SystemState& state, const DerivativeFn& f,
                        double t, const IntegratorConfig& config) {
  return step(state, f, t, config.dt, config.scheme);
}

/// Restore |q_i| = 1, q_i . omega_i = 0 and orthonormal rotations in place.
void retract(SystemState& state);

}  // namespace integrator
}  // namespace cooplift
