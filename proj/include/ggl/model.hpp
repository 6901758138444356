#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ggl {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when a caller breaks an interface precondition (wrong dimensions,
/// invalid parameters). Numerical failures are reported through flags instead.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Snapshot (t, q, v) of a trajectory.
struct GeneralizedState {
  double t = 0.0;
  Vector q;
  Vector v;
};

/// Evaluation interface of an impacting mechanical system
///
///   M(q) dv = h(q, v) dt + W(q)^T dP,   0 <= g(q)  _|_  contact force >= 0,
///
/// with Newton's impact law on closed contacts. `gap_jacobian` returns
/// W = dg/dq (contacts x dof), so gap velocities are W v and generalized
/// contact forces are W^T lambda.
///
/// Implementations must be free of observable mutation: every method is
/// const and may be called concurrently.
class MechanicalModel {
 public:
  virtual ~MechanicalModel() = default;

  virtual std::string name() const = 0;
  virtual int dof() const = 0;
  virtual int contact_count() const = 0;
  /// True when the constraints are two-sided equalities g(q) = 0.
  virtual bool bilateral() const { return false; }
  /// Coefficients of restitution, one per contact.
  virtual const Vector& restitution() const = 0;

  virtual Matrix mass(const Vector& q) const = 0;
  virtual Vector forces(const Vector& q, const Vector& v) const = 0;
  virtual Vector gaps(const Vector& q) const = 0;
  virtual Matrix gap_jacobian(const Vector& q) const = 0;
  /// Gravitational potential, referenced to zero at q = 0.
  virtual double potential(const Vector& q) const = 0;

  // Optional analytic derivatives. Models that return std::nullopt get the
  // central finite-difference fallback in derivatives.hpp.

  /// Hessians d^2 g_i / dq^2, one dof x dof matrix per contact.
  virtual std::optional<std::vector<Matrix>> gap_hessians(const Vector& /*q*/) const {
    return std::nullopt;
  }
  virtual std::optional<Matrix> forces_dq(const Vector& /*q*/, const Vector& /*v*/) const {
    return std::nullopt;
  }
  virtual std::optional<Matrix> forces_dv(const Vector& /*q*/, const Vector& /*v*/) const {
    return std::nullopt;
  }

  double energy(const Vector& q, const Vector& v) const;
  Vector gap_velocities(const Vector& q, const Vector& v) const;

  void check_position(const Vector& q) const;
  void check_state(const Vector& q, const Vector& v) const;
};

}  // namespace ggl
