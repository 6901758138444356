#include "ggl/prox.hpp"

#include <cmath>

namespace ggl {
namespace {

void require_same_size(Eigen::Index expected, Eigen::Index got, const char* what) {
  if (expected != got) {
    throw ContractError(std::string(what) + " has dimension " + std::to_string(got) + ", expected " +
                        std::to_string(expected));
  }
}

}  // namespace

ProxParams::ProxParams(Vector weights) : r(std::move(weights)) {
  for (double w : r) {
    if (!(w > 0.0) || !std::isfinite(w)) throw ContractError("prox weights must be positive and finite");
  }
}

ProxParams ProxParams::uniform(Eigen::Index n, double value) { return ProxParams(Vector::Constant(n, value)); }

Vector impact_residual(const Vector& lambda, const Vector& gd_next, const Vector& gd_now, const Vector& eps,
                       const ProxParams& r) {
  const auto n = lambda.size();
  require_same_size(n, gd_next.size(), "gd_next");
  require_same_size(n, gd_now.size(), "gd_now");
  require_same_size(n, eps.size(), "eps");
  require_same_size(n, r.r.size(), "r");
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out[i] = lambda[i] - prox_nonneg(lambda[i] - r.r[i] * (gd_next[i] + eps[i] * gd_now[i]));
  }
  return out;
}

Vector position_residual(const Vector& psi, const Vector& g_next, const ProxParams& r) {
  const auto n = psi.size();
  require_same_size(n, g_next.size(), "g_next");
  require_same_size(n, r.r.size(), "r");
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out[i] = psi[i] - prox_nonneg(psi[i] - r.r[i] * g_next[i]);
  }
  return out;
}

}  // namespace ggl
