#pragma once

#include "ggl/stepping.hpp"

namespace ggl {

/// `ggl` enforces the impact law and non-penetration together; `reference`
/// drops the position row and the W^T Psi correction, keeping the implicit
/// midpoint evaluations and the impact law only.
enum class UnifiedVariant { ggl, reference };

enum class JacobianMode { analytic, finite_difference };

/// Unknowns of one step, stacked as (q, v, Lambda_red, Psi_red). `psi` is
/// empty for the reference variant.
struct UnifiedUnknowns {
  Vector q_next;
  Vector v_next;
  Vector lambda;
  Vector psi;

  Vector pack() const;
};

struct NewtonReport {
  int iterations = 0;
  double final_residual = 0.0;
  bool converged = false;
  JacobianMode jacobian_mode = JacobianMode::analytic;
};

/// Linearized end-of-step gaps and gap velocities on the active rows.
struct GapPrediction {
  Vector g_next;
  Vector gd_next;
};

/// Nonlinear system of one unified step for a frozen active set.
///
/// With q~ = (q_{n+1} + q_n)/2, v~ = (v_{n+1} + v_n)/2, W~ = W(q~) and
/// h~ = h(q~, v~), and M_M = M(q_n + dt/2 v_n) evaluated once:
///
///   R1 = q_{n+1} - q_n - v~ dt - W~^T Psi
///   R2 = v_{n+1} - v_n - M_M^-1 (h~ dt + W~^T Lambda)
///   R3 = Lambda - prox(Lambda - r_v (gd_{n+1} + eps gd_n))
///   R4 = Psi - prox(Psi - r_p g_{n+1})
///
/// where g_{n+1}, gd_{n+1} are the linearizations of gap_linearization().
class UnifiedSystem {
 public:
  UnifiedSystem(const MechanicalModel& model, GeneralizedState prev, ActiveSet active, const SolverConfig& cfg,
                UnifiedVariant variant = UnifiedVariant::ggl);

  Eigen::Index size() const;
  Eigen::Index active_count() const { return static_cast<Eigen::Index>(active_.size()); }
  const ActiveSet& active() const { return active_; }
  UnifiedVariant variant() const { return variant_; }
  const Vector& velocity_weights() const { return r_vel_; }
  const Vector& position_weights() const { return r_pos_; }
  const Vector& gaps_now() const { return g_now_; }
  const Vector& gap_velocities_now() const { return gd_now_; }

  /// q = q_n + v_n dt, v = v_n, zero multipliers.
  UnifiedUnknowns initial_guess() const;
  UnifiedUnknowns unpack(const Vector& x) const;

  GapPrediction gap_linearization(const UnifiedUnknowns& x) const;
  Vector residual(const UnifiedUnknowns& x) const;
  /// Exact derivative of residual(); the chain-rule factor 1/2 of the
  /// midpoint evaluations is included.
  Matrix jacobian(const UnifiedUnknowns& x) const;
  Matrix finite_difference_jacobian(const UnifiedUnknowns& x) const;

  /// Plain Newton iteration on residual() starting from x. A singular
  /// analytic Jacobian switches to finite differences once.
  NewtonReport solve(UnifiedUnknowns& x, JacobianMode mode = JacobianMode::analytic) const;

 private:
  struct Terms;
  Terms evaluate(const UnifiedUnknowns& x) const;
  void check(const UnifiedUnknowns& x) const;

  const MechanicalModel* model_;
  GeneralizedState prev_;
  ActiveSet active_;
  SolverConfig cfg_;
  UnifiedVariant variant_;
  Eigen::LDLT<Matrix> mass_mid_;
  Vector g_now_;
  Vector gd_now_;
  Vector eps_;
  Vector r_vel_;
  Vector r_pos_;
};

struct UnifiedStepResult {
  StepOutcome outcome;
  NewtonReport report;
};

UnifiedStepResult unified_step(const MechanicalModel& model, const GeneralizedState& prev, const SolverConfig& cfg);
UnifiedStepResult reference_step(const MechanicalModel& model, const GeneralizedState& prev,
                                 const SolverConfig& cfg);

}  // namespace ggl
