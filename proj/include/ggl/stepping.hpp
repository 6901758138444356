#pragma once

#include <string_view>
#include <vector>

#include "ggl/model.hpp"
#include "ggl/prox.hpp"

namespace ggl {

using ActiveSet = std::vector<int>;

enum class Scheme {
  moreau,
  ggl_decoupled,
  ggl_unified,
  ggl_reference,
  dae_pos,
  dae_vel,
  dae_acc,
  dae_ggl,
};

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view text);
bool is_contact_scheme(Scheme scheme);

/// How the prox weights r are chosen for each step.
enum class ProxWeighting {
  delassus,  // velocity rows 1 / G_ii with G = W M^-1 W^T, position rows 1
  unit,      // all rows 1
  scalar,    // all rows `prox_value`
};

struct SolverConfig {
  double dt = 1e-5;
  double newton_tol = 1e-10;
  int max_iter = 50;
  /// A contact enters the active set when its predicted midpoint gap is
  /// below this value.
  double active_tol = 0.0;
  ProxWeighting weighting = ProxWeighting::delassus;
  double prox_value = 1.0;
  /// Unified and reference schemes: if a contact left out of the predicted
  /// active set ends the step penetrating, add it and solve the step again.
  bool reactivate_penetrating = true;

  void validate() const;
};

/// Result of one step. `lambda` and `psi` use the full contact layout with
/// zeros outside `active`; for unilateral contacts they are nonnegative.
struct StepOutcome {
  GeneralizedState state;
  Vector lambda;
  Vector psi;
  ActiveSet active;
  int iterations = 0;
  bool converged = true;
  double residual = 0.0;
};

/// { i : g_i(q + dt/2 v) < active_tol }, in increasing order.
ActiveSet predict_active_set(const MechanicalModel& model, const GeneralizedState& state, double dt,
                             double active_tol);

/// Rows of `full` selected by `active`.
Vector restrict_to(const Vector& full, const ActiveSet& active);
Matrix restrict_rows(const Matrix& full, const ActiveSet& active);
/// Inverse of restrict_to, zero elsewhere.
Vector scatter(const Vector& reduced, const ActiveSet& active, Eigen::Index size);

Vector velocity_weights(const Matrix& delassus, const SolverConfig& cfg);
Vector position_weights(Eigen::Index n, const SolverConfig& cfg);

}  // namespace ggl
