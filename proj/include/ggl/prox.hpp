#pragma once

#include "ggl/model.hpp"

namespace ggl {

/// Projection onto the nonnegative half-line.
inline double prox_nonneg(double x) { return x > 0.0 ? x : 0.0; }

/// Which branch of d prox(f)/dx is used in the semismooth Newton methods:
/// the identity branch for f >= 0, zero otherwise.
inline bool prox_passes(double argument) { return argument >= 0.0; }

/// Positive diagonal weights of the prox equations.
struct ProxParams {
  Vector r;

  explicit ProxParams(Vector weights);
  static ProxParams uniform(Eigen::Index n, double value = 1.0);
};

/// Lambda - prox(Lambda - r (gd_next + eps gd_now)), componentwise.
/// Zero exactly where 0 <= gd_next + eps gd_now  _|_  Lambda >= 0.
Vector impact_residual(const Vector& lambda, const Vector& gd_next, const Vector& gd_now,
                       const Vector& eps, const ProxParams& r);

/// Psi - prox(Psi - r g_next), componentwise. Zero iff 0 <= g_next _|_ Psi >= 0.
Vector position_residual(const Vector& psi, const Vector& g_next, const ProxParams& r);

}  // namespace ggl
