#include "ggl/explicit_steppers.hpp"

#include <algorithm>

namespace ggl {
namespace {

struct MidpointTerms {
  Vector q_mid;
  Eigen::LDLT<Matrix> mass;
  Vector forces;
  Matrix jacobian;  // W(q_M), all contacts
};

MidpointTerms evaluate_midpoint(const MechanicalModel& model, const GeneralizedState& s, double dt) {
  MidpointTerms m;
  m.q_mid = s.q + 0.5 * dt * s.v;
  m.mass.compute(model.mass(m.q_mid));
  if (m.mass.info() != Eigen::Success) throw ContractError(model.name() + ": mass matrix is not positive definite");
  m.forces = model.forces(m.q_mid, s.v);
  m.jacobian = model.gap_jacobian(m.q_mid);
  return m;
}

// Velocity stage shared by both explicit schemes.
StepOutcome velocity_stage(const MechanicalModel& model, const GeneralizedState& s, const SolverConfig& cfg,
                           const MidpointTerms& mid, const ActiveSet& active) {
  const double dt = cfg.dt;
  const Vector v_free = s.v + mid.mass.solve(mid.forces * dt);

  StepOutcome out;
  out.active = active;
  out.lambda = Vector::Zero(model.contact_count());
  out.psi = Vector::Zero(model.contact_count());
  out.state.t = s.t + dt;
  out.state.v = v_free;

  if (!active.empty()) {
    const Matrix w = restrict_rows(mid.jacobian, active);
    const Matrix minv_wt = mid.mass.solve(w.transpose());
    const Matrix delassus = w * minv_wt;
    const Vector eps = restrict_to(model.restitution(), active);
    const Vector offset = w * v_free + eps.cwiseProduct(w * s.v);
    const auto sol = solve_impulse_problem(delassus, offset, velocity_weights(delassus, cfg), cfg.newton_tol,
                                           cfg.max_iter);
    out.state.v = v_free + minv_wt * sol.lambda;
    out.lambda = scatter(sol.lambda, active, model.contact_count());
    out.iterations = sol.iterations;
    out.converged = sol.converged;
    out.residual = sol.residual;
  }
  out.state.q = s.q + 0.5 * dt * (s.v + out.state.v);
  return out;
}

}  // namespace

ImpulseSolution solve_impulse_problem(const Matrix& delassus, const Vector& offset, const Vector& r, double tol,
                                      int max_iter) {
  const Eigen::Index n = offset.size();
  ImpulseSolution sol;
  sol.lambda = Vector::Zero(n);
  Matrix jac(n, n);
  Vector res(n);
  for (int it = 0;; ++it) {
    const Vector rel = delassus * sol.lambda + offset;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double arg = sol.lambda[i] - r[i] * rel[i];
      res[i] = sol.lambda[i] - prox_nonneg(arg);
      if (prox_passes(arg)) {
        jac.row(i) = r[i] * delassus.row(i);
      } else {
        jac.row(i).setZero();
        jac(i, i) = 1.0;
      }
    }
    sol.residual = res.lpNorm<Eigen::Infinity>();
    sol.iterations = it;
    if (sol.residual <= tol) {
      sol.converged = true;
      sol.lambda = sol.lambda.cwiseMax(0.0);  // roundoff below zero
      return sol;
    }
    if (it >= max_iter) return sol;
    Eigen::FullPivLU<Matrix> lu(jac);
    if (!lu.isInvertible()) return sol;
    sol.lambda -= lu.solve(res);
  }
}

StepOutcome moreau_step(const MechanicalModel& model, const GeneralizedState& state, const SolverConfig& cfg) {
  cfg.validate();
  model.check_state(state.q, state.v);
  const auto active = predict_active_set(model, state, cfg.dt, cfg.active_tol);
  const auto mid = evaluate_midpoint(model, state, cfg.dt);
  return velocity_stage(model, state, cfg, mid, active);
}

StepOutcome decoupled_ggl_step(const MechanicalModel& model, const GeneralizedState& state,
                               const SolverConfig& cfg) {
  cfg.validate();
  model.check_state(state.q, state.v);
  const auto active = predict_active_set(model, state, cfg.dt, cfg.active_tol);
  const auto mid = evaluate_midpoint(model, state, cfg.dt);
  StepOutcome out = velocity_stage(model, state, cfg, mid, active);
  if (active.empty()) return out;

  // Projection of the forecast onto g >= 0 along the columns of W_M^T.
  const Vector forecast = out.state.q;
  const Matrix wt = restrict_rows(mid.jacobian, active).transpose();
  const Eigen::Index n = static_cast<Eigen::Index>(active.size());
  const Vector r = position_weights(n, cfg);
  Vector psi = Vector::Zero(n);
  Vector res(n);
  Matrix jac(n, n);
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;
  for (;; ++iterations) {
    const Vector q = forecast + wt * psi;
    const Vector g = restrict_to(model.gaps(q), active);
    const Matrix dg = restrict_rows(model.gap_jacobian(q), active) * wt;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double arg = psi[i] - r[i] * g[i];
      res[i] = psi[i] - prox_nonneg(arg);
      if (prox_passes(arg)) {
        jac.row(i) = r[i] * dg.row(i);
      } else {
        jac.row(i).setZero();
        jac(i, i) = 1.0;
      }
    }
    residual = res.lpNorm<Eigen::Infinity>();
    if (residual <= cfg.newton_tol) {
      converged = true;
      break;
    }
    if (iterations >= cfg.max_iter) break;
    Eigen::FullPivLU<Matrix> lu(jac);
    if (!lu.isInvertible()) break;
    psi -= lu.solve(res);
  }
  out.state.q = forecast + wt * psi;
  out.psi = scatter(psi.cwiseMax(0.0), active, model.contact_count());
  out.iterations += iterations;
  out.converged = out.converged && converged;
  out.residual = std::max(out.residual, residual);
  return out;
}

}  // namespace ggl
