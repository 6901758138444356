#include "ggl/unified_stepper.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "ggl/derivatives.hpp"

namespace ggl {

Vector UnifiedUnknowns::pack() const {
  Vector x(q_next.size() + v_next.size() + lambda.size() + psi.size());
  x << q_next, v_next, lambda, psi;
  return x;
}

struct UnifiedSystem::Terms {
  Vector q_mid;
  Vector v_mid;
  Matrix w;           // W(q~), active rows
  Vector h;           // h(q~, v~)
  Vector minv_force;  // M_M^-1 (h~ dt + W~^T Lambda)
  Vector shift;       // v~ dt + W~^T Psi, equal to q_{n+1} - q_n at a root
  GapPrediction gaps;
};

UnifiedSystem::UnifiedSystem(const MechanicalModel& model, GeneralizedState prev, ActiveSet active,
                             const SolverConfig& cfg, UnifiedVariant variant)
    : model_(&model), prev_(std::move(prev)), active_(std::move(active)), cfg_(cfg), variant_(variant) {
  cfg_.validate();
  model.check_state(prev_.q, prev_.v);
  for (int i : active_) {
    if (i < 0 || i >= model.contact_count()) throw ContractError("active set index out of range");
  }
  const Vector q_pred = prev_.q + 0.5 * cfg_.dt * prev_.v;
  mass_mid_.compute(model.mass(q_pred));
  if (mass_mid_.info() != Eigen::Success) throw ContractError(model.name() + ": singular mass matrix");

  g_now_ = restrict_to(model.gaps(prev_.q), active_);
  gd_now_ = restrict_to(model.gap_jacobian(prev_.q) * prev_.v, active_);
  eps_ = restrict_to(model.restitution(), active_);
  const Matrix w_pred = restrict_rows(model.gap_jacobian(q_pred), active_);
  r_vel_ = ggl::velocity_weights(w_pred * mass_mid_.solve(w_pred.transpose()), cfg_);
  r_pos_ = ggl::position_weights(active_count(), cfg_);
}

Eigen::Index UnifiedSystem::size() const {
  const Eigen::Index n = model_->dof();
  const Eigen::Index m = active_count();
  return 2 * n + m + (variant_ == UnifiedVariant::ggl ? m : 0);
}

UnifiedUnknowns UnifiedSystem::initial_guess() const {
  const Eigen::Index m = active_count();
  return {prev_.q + cfg_.dt * prev_.v, prev_.v, Vector::Zero(m),
          Vector::Zero(variant_ == UnifiedVariant::ggl ? m : 0)};
}

UnifiedUnknowns UnifiedSystem::unpack(const Vector& x) const {
  if (x.size() != size()) throw ContractError("unified unknowns: wrong dimension");
  const Eigen::Index n = model_->dof();
  const Eigen::Index m = active_count();
  UnifiedUnknowns u;
  u.q_next = x.segment(0, n);
  u.v_next = x.segment(n, n);
  u.lambda = x.segment(2 * n, m);
  u.psi = x.segment(2 * n + m, size() - 2 * n - m);
  return u;
}

void UnifiedSystem::check(const UnifiedUnknowns& x) const {
  const Eigen::Index m = active_count();
  if (x.q_next.size() != model_->dof() || x.v_next.size() != model_->dof() || x.lambda.size() != m ||
      x.psi.size() != (variant_ == UnifiedVariant::ggl ? m : 0)) {
    throw ContractError("unified unknowns: dimension mismatch");
  }
}

UnifiedSystem::Terms UnifiedSystem::evaluate(const UnifiedUnknowns& x) const {
  check(x);
  const double dt = cfg_.dt;
  Terms t;
  t.q_mid = 0.5 * (x.q_next + prev_.q);
  t.v_mid = 0.5 * (x.v_next + prev_.v);
  t.w = restrict_rows(model_->gap_jacobian(t.q_mid), active_);
  t.h = model_->forces(t.q_mid, t.v_mid);
  t.minv_force = mass_mid_.solve(t.h * dt + t.w.transpose() * x.lambda);
  t.shift = t.v_mid * dt;
  if (variant_ == UnifiedVariant::ggl) t.shift += t.w.transpose() * x.psi;
  t.gaps.g_next = g_now_ + t.w * t.shift;
  t.gaps.gd_next = gd_now_ + t.w * t.minv_force;
  if (!t.minv_force.allFinite() || !t.gaps.g_next.allFinite()) {
    throw std::runtime_error(model_->name() + ": non-finite model evaluation in unified step");
  }
  return t;
}

GapPrediction UnifiedSystem::gap_linearization(const UnifiedUnknowns& x) const { return evaluate(x).gaps; }

Vector UnifiedSystem::residual(const UnifiedUnknowns& x) const {
  const Terms t = evaluate(x);
  const Eigen::Index n = model_->dof();
  const Eigen::Index m = active_count();
  Vector r(size());
  r.segment(0, n) = x.q_next - prev_.q - t.shift;
  r.segment(n, n) = x.v_next - prev_.v - t.minv_force;
  r.segment(2 * n, m) = impact_residual(x.lambda, t.gaps.gd_next, gd_now_, eps_, ProxParams(r_vel_));
  if (variant_ == UnifiedVariant::ggl) {
    r.segment(2 * n + m, m) = position_residual(x.psi, t.gaps.g_next, ProxParams(r_pos_));
  }
  return r;
}

Matrix UnifiedSystem::jacobian(const UnifiedUnknowns& x) const {
  const Terms t = evaluate(x);
  const double dt = cfg_.dt;
  const Eigen::Index n = model_->dof();
  const Eigen::Index m = active_count();
  const bool with_psi = variant_ == UnifiedVariant::ggl;
  const Eigen::Index lam = 2 * n;
  const Eigen::Index psi = 2 * n + m;
  const Eigen::Index nc = model_->contact_count();

  // Midpoint derivatives; every d/dq_{n+1} or d/dv_{n+1} of a quantity
  // evaluated at (q~, v~) carries a factor 1/2.
  const Matrix dh_dq = 0.5 * ggl::forces_dq(*model_, t.q_mid, t.v_mid);
  const Matrix dh_dv = 0.5 * ggl::forces_dv(*model_, t.q_mid, t.v_mid);
  const Matrix hess_lambda = 0.5 * weighted_gap_hessian(*model_, t.q_mid, scatter(x.lambda, active_, nc));
  const Matrix hess_psi =
      with_psi ? Matrix(0.5 * weighted_gap_hessian(*model_, t.q_mid, scatter(x.psi, active_, nc)))
               : Matrix::Zero(n, n);
  const Matrix minv_wt = mass_mid_.solve(t.w.transpose());
  const Matrix dforce_dq = mass_mid_.solve(dh_dq * dt + hess_lambda);  // d(M^-1 u)/dq
  const Matrix dforce_dv = mass_mid_.solve(dh_dv * dt);

  Matrix jac = Matrix::Zero(size(), size());
  const Matrix id = Matrix::Identity(n, n);
  jac.block(0, 0, n, n) = id - hess_psi;
  jac.block(0, n, n, n) = -0.5 * dt * id;
  if (with_psi) jac.block(0, psi, n, m) = -t.w.transpose();

  jac.block(n, 0, n, n) = -dforce_dq;
  jac.block(n, n, n, n) = id - dforce_dv;
  jac.block(n, lam, n, m) = -minv_wt;

  if (m == 0) return jac;

  // Row 3: gd_{n+1} = gd_n + W~ M_M^-1 (h~ dt + W~^T Lambda).
  const Matrix dgd_dq =
      0.5 * restrict_rows(gap_jacobian_derivative(*model_, t.q_mid, t.minv_force), active_) + t.w * dforce_dq;
  const Matrix dgd_dv = t.w * dforce_dv;
  const Matrix dgd_dl = t.w * minv_wt;
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index row = lam + i;
    const double arg = x.lambda[i] - r_vel_[i] * (t.gaps.gd_next[i] + eps_[i] * gd_now_[i]);
    if (prox_passes(arg)) {
      jac.block(row, 0, 1, n) = r_vel_[i] * dgd_dq.row(i);
      jac.block(row, n, 1, n) = r_vel_[i] * dgd_dv.row(i);
      jac.block(row, lam, 1, m) = r_vel_[i] * dgd_dl.row(i);
    } else {
      jac(row, lam + i) = 1.0;
    }
  }
  if (!with_psi) return jac;

  // Row 4: g_{n+1} = g_n + W~ (v~ dt + W~^T Psi).
  const Matrix dg_dq = 0.5 * restrict_rows(gap_jacobian_derivative(*model_, t.q_mid, t.shift), active_) +
                       t.w * hess_psi;
  const Matrix dg_dv = 0.5 * dt * t.w;
  const Matrix dg_dpsi = t.w * t.w.transpose();
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index row = psi + i;
    const double arg = x.psi[i] - r_pos_[i] * t.gaps.g_next[i];
    if (prox_passes(arg)) {
      jac.block(row, 0, 1, n) = r_pos_[i] * dg_dq.row(i);
      jac.block(row, n, 1, n) = r_pos_[i] * dg_dv.row(i);
      jac.block(row, psi, 1, m) = r_pos_[i] * dg_dpsi.row(i);
    } else {
      jac(row, psi + i) = 1.0;
    }
  }
  if (!jac.allFinite()) throw std::runtime_error(model_->name() + ": non-finite unified Jacobian");
  return jac;
}

Matrix UnifiedSystem::finite_difference_jacobian(const UnifiedUnknowns& x) const {
  const Vector x0 = x.pack();
  Matrix jac(size(), size());
  for (Eigen::Index j = 0; j < x0.size(); ++j) {
    const double h = 1e-7 * std::max(1.0, std::abs(x0[j]));
    Vector xp = x0, xm = x0;
    xp[j] += h;
    xm[j] -= h;
    jac.col(j) = (residual(unpack(xp)) - residual(unpack(xm))) / (2.0 * h);
  }
  return jac;
}

NewtonReport UnifiedSystem::solve(UnifiedUnknowns& x, JacobianMode mode) const {
  NewtonReport report;
  report.jacobian_mode = mode;
  bool switched = false;
  Vector xv = x.pack();
  for (int it = 0;; ++it) {
    const UnifiedUnknowns cur = unpack(xv);
    const Vector res = residual(cur);
    report.iterations = it;
    report.final_residual = res.lpNorm<Eigen::Infinity>();
    if (!std::isfinite(report.final_residual)) break;
    if (report.final_residual <= cfg_.newton_tol) {
      report.converged = true;
      break;
    }
    if (it >= cfg_.max_iter) break;
    Eigen::FullPivLU<Matrix> lu(report.jacobian_mode == JacobianMode::analytic ? jacobian(cur)
                                                                             : finite_difference_jacobian(cur));
    if (!lu.isInvertible()) {
      if (switched || report.jacobian_mode == JacobianMode::finite_difference) break;
      report.jacobian_mode = JacobianMode::finite_difference;
      switched = true;
      lu.compute(finite_difference_jacobian(cur));
      if (!lu.isInvertible()) break;
    }
    xv -= lu.solve(res);
  }
  x = unpack(xv);
  return report;
}

namespace {

UnifiedStepResult run_unified(const MechanicalModel& model, const GeneralizedState& prev, const SolverConfig& cfg,
                              UnifiedVariant variant) {
  cfg.validate();
  model.check_state(prev.q, prev.v);
  const Eigen::Index nc = model.contact_count();
  ActiveSet active = predict_active_set(model, prev, cfg.dt, cfg.active_tol);

  UnifiedStepResult result;
  int total_iterations = 0;
  Vector lambda_full = Vector::Zero(nc);
  Vector psi_full = Vector::Zero(nc);
  std::optional<UnifiedUnknowns> warm;
  for (;;) {
    UnifiedSystem system(model, prev, active, cfg, variant);
    UnifiedUnknowns x = system.initial_guess();
    if (warm) {
      x.q_next = warm->q_next;
      x.v_next = warm->v_next;
      x.lambda = restrict_to(lambda_full, active);
      if (variant == UnifiedVariant::ggl) x.psi = restrict_to(psi_full, active);
    }
    result.report = system.solve(x);
    total_iterations += result.report.iterations;
    lambda_full = scatter(x.lambda, active, nc);
    psi_full = variant == UnifiedVariant::ggl ? scatter(x.psi, active, nc) : Vector::Zero(nc);
    warm = x;

    if (!cfg.reactivate_penetrating || !result.report.converged) break;
    const Vector g = model.gaps(x.q_next);
    ActiveSet extended = active;
    for (int i = 0; i < nc; ++i) {
      if (g[i] < 0.0 && !std::binary_search(active.begin(), active.end(), i)) extended.push_back(i);
    }
    if (extended.size() == active.size()) break;
    std::sort(extended.begin(), extended.end());
    active = std::move(extended);
  }

  StepOutcome& out = result.outcome;
  out.state = {prev.t + cfg.dt, warm->q_next, warm->v_next};
  // converged multipliers can sit a roundoff below zero
  out.lambda = result.report.converged ? Vector(lambda_full.cwiseMax(0.0)) : lambda_full;
  out.psi = result.report.converged ? Vector(psi_full.cwiseMax(0.0)) : psi_full;
  out.active = active;
  out.iterations = total_iterations;
  out.converged = result.report.converged;
  out.residual = result.report.final_residual;
  result.report.iterations = total_iterations;
  return result;
}

}  // namespace

UnifiedStepResult unified_step(const MechanicalModel& model, const GeneralizedState& prev,
                               const SolverConfig& cfg) {
  return run_unified(model, prev, cfg, UnifiedVariant::ggl);
}

UnifiedStepResult reference_step(const MechanicalModel& model, const GeneralizedState& prev,
                                 const SolverConfig& cfg) {
  return run_unified(model, prev, cfg, UnifiedVariant::reference);
}

}  // namespace ggl
