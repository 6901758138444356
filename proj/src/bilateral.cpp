#include "ggl/bilateral.hpp"

#include <cmath>

#include "ggl/derivatives.hpp"
#include "ggl/simulation.hpp"

namespace ggl {

std::string_view to_string(BilateralScheme scheme) {
  switch (scheme) {
    case BilateralScheme::position:
      return "position";
    case BilateralScheme::velocity:
      return "velocity";
    case BilateralScheme::acceleration:
      return "acceleration";
    case BilateralScheme::ggl:
      return "ggl";
  }
  return "unknown";
}

BilateralScheme bilateral_scheme_of(Scheme scheme) {
  switch (scheme) {
    case Scheme::dae_pos:
      return BilateralScheme::position;
    case Scheme::dae_vel:
      return BilateralScheme::velocity;
    case Scheme::dae_acc:
      return BilateralScheme::acceleration;
    case Scheme::dae_ggl:
      return BilateralScheme::ggl;
    default:
      throw ContractError("scheme " + std::string(to_string(scheme)) + " is not a bilateral scheme");
  }
}

StepOutcome bilateral_step(const MechanicalModel& model, const GeneralizedState& prev, BilateralScheme scheme,
                           const SolverConfig& cfg) {
  cfg.validate();
  model.check_state(prev.q, prev.v);
  if (!model.bilateral()) throw ContractError("bilateral_step requires a bilaterally constrained model");

  const double dt = cfg.dt;
  const Eigen::Index m = model.contact_count();
  const Vector q_mid = prev.q + 0.5 * dt * prev.v;
  Eigen::LDLT<Matrix> mass(model.mass(q_mid));
  if (mass.info() != Eigen::Success) throw ContractError(model.name() + ": mass matrix is not positive definite");
  const Vector h_mid = model.forces(q_mid, prev.v);
  const Matrix w_mid = model.gap_jacobian(q_mid);
  const Matrix minv_wt = mass.solve(w_mid.transpose());
  const Matrix delassus = w_mid * minv_wt;
  Eigen::FullPivLU<Matrix> delassus_lu(delassus);
  if (!delassus_lu.isInvertible() || delassus.norm() < 1e-14) {
    throw ContractError(model.name() + ": constraint Jacobian is singular (locked mechanism)");
  }
  const Vector v_free = prev.v + mass.solve(h_mid * dt);

  StepOutcome out;
  out.state.t = prev.t + dt;
  out.lambda = Vector::Zero(m);
  out.psi = Vector::Zero(m);
  out.active.resize(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) out.active[static_cast<std::size_t>(i)] = static_cast<int>(i);

  if (scheme == BilateralScheme::acceleration) {
    // (W M^-1 W^T) lambda = -(W M^-1 h + Wdot v), Wdot v by central differences.
    const Vector wdot_v = fd_gap_jacobian_derivative(model, q_mid, prev.v) * prev.v;
    const Vector force = delassus_lu.solve(-(w_mid * mass.solve(h_mid) + wdot_v));
    out.lambda = force * dt;
    out.state.v = v_free + minv_wt * out.lambda;
    out.state.q = prev.q + 0.5 * dt * (prev.v + out.state.v);
    return out;
  }

  const bool with_psi = scheme == BilateralScheme::ggl;
  const Eigen::Index unknowns = with_psi ? 2 * m : m;
  const Eigen::Index equations = with_psi ? 2 * m : m;
  Vector x = Vector::Zero(unknowns);
  Vector res(equations);
  Matrix jac(equations, unknowns);

  auto positions = [&](const Vector& v_next, const Vector& y) {
    Vector q = prev.q + 0.5 * dt * (prev.v + v_next);
    if (with_psi) q += w_mid.transpose() * y.tail(m);
    return q;
  };

  for (int it = 0;; ++it) {
    const Vector v_next = v_free + minv_wt * x.head(m);
    const Vector q_next = positions(v_next, x);
    const Matrix w_next = model.gap_jacobian(q_next);
    const Matrix dq_dl = 0.5 * dt * minv_wt;
    switch (scheme) {
      case BilateralScheme::position:
        res = model.gaps(q_next);
        jac = w_next * dq_dl;
        break;
      case BilateralScheme::velocity: {
        res = w_next * v_next;
        jac = gap_jacobian_derivative(model, q_next, v_next) * dq_dl + w_next * minv_wt;
        break;
      }
      case BilateralScheme::ggl: {
        const Matrix dw_v = gap_jacobian_derivative(model, q_next, v_next);
        res << w_next * v_next, model.gaps(q_next);
        jac.block(0, 0, m, m) = dw_v * dq_dl + w_next * minv_wt;
        jac.block(0, m, m, m) = dw_v * w_mid.transpose();
        jac.block(m, 0, m, m) = w_next * dq_dl;
        jac.block(m, m, m, m) = w_next * w_mid.transpose();
        break;
      }
      case BilateralScheme::acceleration:
        break;
    }
    out.iterations = it;
    out.residual = res.lpNorm<Eigen::Infinity>();
    if (out.residual <= cfg.newton_tol) {
      out.converged = true;
      break;
    }
    if (it >= cfg.max_iter || !std::isfinite(out.residual)) {
      out.converged = false;
      break;
    }
    Eigen::FullPivLU<Matrix> lu(jac);
    if (!lu.isInvertible()) {
      out.converged = false;
      break;
    }
    x -= lu.solve(res);
  }

  out.state.v = v_free + minv_wt * x.head(m);
  out.state.q = positions(out.state.v, x);
  out.lambda = x.head(m);
  if (with_psi) out.psi = x.tail(m);
  return out;
}

DriftSeries drift_series(const MechanicalModel& model, BilateralScheme scheme, const SolverConfig& cfg,
                         const GeneralizedState& initial, double horizon) {
  const std::size_t steps = step_count(horizon, cfg.dt);
  DriftSeries series;
  series.t.reserve(steps + 1);
  series.g.reserve(steps + 1);
  GeneralizedState s = initial;
  series.t.push_back(s.t);
  series.g.push_back(model.gaps(s.q)[0]);
  for (std::size_t k = 1; k <= steps; ++k) {
    StepOutcome o = bilateral_step(model, s, scheme, cfg);
    series.converged = series.converged && o.converged;
    s = std::move(o.state);
    s.t = initial.t + static_cast<double>(k) * cfg.dt;
    series.t.push_back(s.t);
    series.g.push_back(model.gaps(s.q)[0]);
  }
  return series;
}

}  // namespace ggl
