#include "ggl/stepping.hpp"

#include <cmath>
#include <string>

namespace ggl {
namespace {

constexpr std::pair<Scheme, std::string_view> kSchemeNames[] = {
    {Scheme::moreau, "moreau"},         {Scheme::ggl_decoupled, "ggl_decoupled"},
    {Scheme::ggl_unified, "ggl_unified"}, {Scheme::ggl_reference, "ggl_reference"},
    {Scheme::dae_pos, "dae_pos"},       {Scheme::dae_vel, "dae_vel"},
    {Scheme::dae_acc, "dae_acc"},       {Scheme::dae_ggl, "dae_ggl"},
};

}  // namespace

std::string_view to_string(Scheme scheme) {
  for (const auto& [s, name] : kSchemeNames) {
    if (s == scheme) return name;
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view text) {
  for (const auto& [s, name] : kSchemeNames) {
    if (name == text) return s;
  }
  throw ContractError("unknown scheme '" + std::string(text) + "'");
}

bool is_contact_scheme(Scheme scheme) {
  return scheme == Scheme::moreau || scheme == Scheme::ggl_decoupled || scheme == Scheme::ggl_unified ||
         scheme == Scheme::ggl_reference;
}

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ContractError("dt must be positive");
  if (!(newton_tol > 0.0)) throw ContractError("newton_tol must be positive");
  if (max_iter < 1) throw ContractError("max_iter must be at least 1");
  if (!std::isfinite(active_tol)) throw ContractError("active_tol must be finite");
  if (weighting == ProxWeighting::scalar && !(prox_value > 0.0 && std::isfinite(prox_value))) {
    throw ContractError("scalar prox weight must be positive");
  }
}

ActiveSet predict_active_set(const MechanicalModel& model, const GeneralizedState& state, double dt,
                             double active_tol) {
  if (!(dt > 0.0)) throw ContractError("predict_active_set: dt must be positive");
  model.check_state(state.q, state.v);
  const Vector g = model.gaps(state.q + 0.5 * dt * state.v);
  ActiveSet active;
  for (int i = 0; i < g.size(); ++i) {
    if (g[i] < active_tol) active.push_back(i);
  }
  return active;
}

Vector restrict_to(const Vector& full, const ActiveSet& active) {
  Vector out(static_cast<Eigen::Index>(active.size()));
  for (std::size_t k = 0; k < active.size(); ++k) out[static_cast<Eigen::Index>(k)] = full[active[k]];
  return out;
}

Matrix restrict_rows(const Matrix& full, const ActiveSet& active) {
  Matrix out(static_cast<Eigen::Index>(active.size()), full.cols());
  for (std::size_t k = 0; k < active.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = full.row(active[k]);
  return out;
}

Vector scatter(const Vector& reduced, const ActiveSet& active, Eigen::Index size) {
  if (reduced.size() != static_cast<Eigen::Index>(active.size())) throw ContractError("scatter: size mismatch");
  Vector out = Vector::Zero(size);
  for (std::size_t k = 0; k < active.size(); ++k) out[active[k]] = reduced[static_cast<Eigen::Index>(k)];
  return out;
}

Vector velocity_weights(const Matrix& delassus, const SolverConfig& cfg) {
  const Eigen::Index n = delassus.rows();
  switch (cfg.weighting) {
    case ProxWeighting::delassus:
      return delassus.diagonal().cwiseInverse();
    case ProxWeighting::unit:
      return Vector::Ones(n);
    case ProxWeighting::scalar:
      return Vector::Constant(n, cfg.prox_value);
  }
  return Vector::Ones(n);
}

Vector position_weights(Eigen::Index n, const SolverConfig& cfg) {
  if (cfg.weighting == ProxWeighting::scalar) return Vector::Constant(n, cfg.prox_value);
  return Vector::Ones(n);
}

}  // namespace ggl
