#pragma once

#include <vector>

#include "ggl/stepping.hpp"

namespace ggl {

/// Level at which the bilateral constraint g(q) = 0 is imposed.
enum class BilateralScheme {
  position,      // g(q_{n+1}) = 0 (index 3)
  velocity,      // W(q_{n+1}) v_{n+1} = 0 (index 2)
  acceleration,  // d^2 g/dt^2 = 0 at the midpoint (index 1)
  ggl,           // W(q_{n+1}) v_{n+1} = 0 and g(q_{n+1}) = 0, extra multiplier Psi
};

std::string_view to_string(BilateralScheme scheme);
/// dae_pos, dae_vel, dae_acc, dae_ggl map onto the bilateral schemes.
BilateralScheme bilateral_scheme_of(Scheme scheme);

/// One step of the explicit-midpoint skeleton
///
///   v_{n+1} = v_n + M_M^-1 (h_M dt + W_M^T Lambda)
///   q_{n+1} = q_n + (v_n + v_{n+1}) dt/2 [+ W_M^T Psi for ggl]
///
/// with the scheme's constraint equation solved for the multipliers by
/// Newton's method. Multipliers are two-sided and may have either sign.
/// Throws ContractError for a non-bilateral model or a locked mechanism
/// (singular W M^-1 W^T).
StepOutcome bilateral_step(const MechanicalModel& model, const GeneralizedState& prev, BilateralScheme scheme,
                           const SolverConfig& cfg);

struct DriftSeries {
  std::vector<double> t;
  std::vector<double> g;
  bool converged = true;
};

/// Constraint value g(q_n) along a run of `horizon` seconds (a multiple of dt).
DriftSeries drift_series(const MechanicalModel& model, BilateralScheme scheme, const SolverConfig& cfg,
                         const GeneralizedState& initial, double horizon);

}  // namespace ggl
