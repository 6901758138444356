#pragma once

#include "ggl/stepping.hpp"

namespace ggl {

/// Moreau's midpoint rule: M, h and W evaluated explicitly at
/// q_M = q_n + dt/2 v_n, impulses from the prox form of Newton's impact law
/// on the predicted active set, solved by semismooth Newton from Lambda = 0.
StepOutcome moreau_step(const MechanicalModel& model, const GeneralizedState& state, const SolverConfig& cfg);

/// Moreau's velocity update followed by a projection of the explicit
/// forecast q_n + (v_n + v_{n+1}) dt/2 onto g >= 0 along W_M^T on the same
/// active set.
StepOutcome decoupled_ggl_step(const MechanicalModel& model, const GeneralizedState& state,
                               const SolverConfig& cfg);

/// Solves Lambda - prox(Lambda - r (G Lambda + c)) = 0 by semismooth Newton.
/// This is the impulse subproblem of Moreau's rule, where G Lambda + c is
/// the affine map Lambda -> gd_next + eps gd_now.
struct ImpulseSolution {
  Vector lambda;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;
};
ImpulseSolution solve_impulse_problem(const Matrix& delassus, const Vector& offset, const Vector& r,
                                      double tol, int max_iter);

}  // namespace ggl
