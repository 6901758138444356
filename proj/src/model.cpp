#include "ggl/model.hpp"

#include <cmath>

namespace ggl {

double MechanicalModel::energy(const Vector& q, const Vector& v) const {
  check_state(q, v);
  return 0.5 * v.dot(mass(q) * v) + potential(q);
}

Vector MechanicalModel::gap_velocities(const Vector& q, const Vector& v) const {
  check_state(q, v);
  return gap_jacobian(q) * v;
}

void MechanicalModel::check_position(const Vector& q) const {
  if (q.size() != dof()) {
    throw ContractError(name() + ": position has dimension " + std::to_string(q.size()) +
                        ", expected " + std::to_string(dof()));
  }
}

void MechanicalModel::check_state(const Vector& q, const Vector& v) const {
  check_position(q);
  if (v.size() != dof()) {
    throw ContractError(name() + ": velocity has dimension " + std::to_string(v.size()) +
                        ", expected " + std::to_string(dof()));
  }
}

}  // namespace ggl
