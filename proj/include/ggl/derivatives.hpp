#pragma once

#include "ggl/model.hpp"

namespace ggl {

/// Step for the central-difference fallbacks: 1e-7 * max(1, |q|_inf).
double fd_step(const Vector& q);

/// d(W^T a)/dq = sum_i a_i d^2 g_i/dq^2 for a contact-space vector `a`
/// (dof x dof). Uses the model's Hessians when available.
Matrix weighted_gap_hessian(const MechanicalModel& model, const Vector& q, const Vector& a);

/// d(W b)/dq for a fixed generalized vector `b` (contacts x dof).
Matrix gap_jacobian_derivative(const MechanicalModel& model, const Vector& q, const Vector& b);

Matrix forces_dq(const MechanicalModel& model, const Vector& q, const Vector& v);
Matrix forces_dv(const MechanicalModel& model, const Vector& q, const Vector& v);

/// Finite-difference versions of the above, exposed so the analytic model
/// derivatives can be checked against them.
Matrix fd_weighted_gap_hessian(const MechanicalModel& model, const Vector& q, const Vector& a);
Matrix fd_gap_jacobian_derivative(const MechanicalModel& model, const Vector& q, const Vector& b);
Matrix fd_forces_dq(const MechanicalModel& model, const Vector& q, const Vector& v);
Matrix fd_forces_dv(const MechanicalModel& model, const Vector& q, const Vector& v);

}  // namespace ggl
