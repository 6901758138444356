#include "ggl/derivatives.hpp"

#include <algorithm>

namespace ggl {

double fd_step(const Vector& q) {
  const double scale = q.size() > 0 ? q.cwiseAbs().maxCoeff() : 0.0;
  return 1e-7 * std::max(1.0, scale);
}

Matrix fd_weighted_gap_hessian(const MechanicalModel& model, const Vector& q, const Vector& a) {
  const int n = model.dof();
  const double h = fd_step(q);
  Matrix out(n, n);
  for (int j = 0; j < n; ++j) {
    Vector qp = q, qm = q;
    qp[j] += h;
    qm[j] -= h;
    out.col(j) = (model.gap_jacobian(qp).transpose() * a - model.gap_jacobian(qm).transpose() * a) / (2.0 * h);
  }
  return out;
}

Matrix fd_gap_jacobian_derivative(const MechanicalModel& model, const Vector& q, const Vector& b) {
  const int n = model.dof();
  const double h = fd_step(q);
  Matrix out(model.contact_count(), n);
  for (int j = 0; j < n; ++j) {
    Vector qp = q, qm = q;
    qp[j] += h;
    qm[j] -= h;
    out.col(j) = (model.gap_jacobian(qp) * b - model.gap_jacobian(qm) * b) / (2.0 * h);
  }
  return out;
}

Matrix fd_forces_dq(const MechanicalModel& model, const Vector& q, const Vector& v) {
  const int n = model.dof();
  const double h = fd_step(q);
  Matrix out(n, n);
  for (int j = 0; j < n; ++j) {
    Vector qp = q, qm = q;
    qp[j] += h;
    qm[j] -= h;
    out.col(j) = (model.forces(qp, v) - model.forces(qm, v)) / (2.0 * h);
  }
  return out;
}

Matrix fd_forces_dv(const MechanicalModel& model, const Vector& q, const Vector& v) {
  const int n = model.dof();
  const double h = fd_step(v);
  Matrix out(n, n);
  for (int j = 0; j < n; ++j) {
    Vector vp = v, vm = v;
    vp[j] += h;
    vm[j] -= h;
    out.col(j) = (model.forces(q, vp) - model.forces(q, vm)) / (2.0 * h);
  }
  return out;
}

Matrix weighted_gap_hessian(const MechanicalModel& model, const Vector& q, const Vector& a) {
  model.check_position(q);
  if (a.size() != model.contact_count()) throw ContractError("weighted_gap_hessian: weight dimension mismatch");
  if (auto hessians = model.gap_hessians(q)) {
    Matrix out = Matrix::Zero(model.dof(), model.dof());
    for (int i = 0; i < model.contact_count(); ++i) {
      if (a[i] != 0.0) out += a[i] * (*hessians)[static_cast<std::size_t>(i)];
    }
    return out;
  }
  return fd_weighted_gap_hessian(model, q, a);
}

Matrix gap_jacobian_derivative(const MechanicalModel& model, const Vector& q, const Vector& b) {
  model.check_state(q, b);
  if (auto hessians = model.gap_hessians(q)) {
    Matrix out(model.contact_count(), model.dof());
    for (int i = 0; i < model.contact_count(); ++i) {
      out.row(i) = b.transpose() * (*hessians)[static_cast<std::size_t>(i)];
    }
    return out;
  }
  return fd_gap_jacobian_derivative(model, q, b);
}

Matrix forces_dq(const MechanicalModel& model, const Vector& q, const Vector& v) {
  if (auto d = model.forces_dq(q, v)) return *d;
  return fd_forces_dq(model, q, v);
}

Matrix forces_dv(const MechanicalModel& model, const Vector& q, const Vector& v) {
  if (auto d = model.forces_dv(q, v)) return *d;
  return fd_forces_dv(model, q, v);
}

}  // namespace ggl
