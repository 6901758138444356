#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ggl/simulation.hpp"

namespace ggl {

/// Shortest decimal string that parses back to the same double.
std::string format_number(double x);

/// Column names of the trajectory files for `model`:
///   slider_unilateral: t,theta1..3,omega1..3,g1..4,gd1..4,L1..4,P1..4,E,active_mask,newton_iters
///   slider_bilateral:  t,theta1,theta2,omega1,omega2,g,gd,lambda,psi,E,newton_iters
///   ball:              t,q,v,g,gd,L,P,E,active,newton_iters
std::vector<std::string> trajectory_columns(const MechanicalModel& model);

/// Values of record entry k in trajectory_columns() order. The active set
/// is a bit mask with bit i set for contact i.
std::vector<double> trajectory_row(const MechanicalModel& model, const TrajectoryRecord& rec, std::size_t k);

/// Indices 0, stride, 2 stride, ... of the record, floor((n-1)/stride) + 1 rows.
std::vector<std::size_t> recorded_rows(const TrajectoryRecord& rec, int stride);

void write_trajectory_csv(std::ostream& out, const MechanicalModel& model, const TrajectoryRecord& rec, int stride);
/// {"columns": [...], "rows": [[...], ...]}
void write_trajectory_json(std::ostream& out, const MechanicalModel& model, const TrajectoryRecord& rec,
                           int stride);

}  // namespace ggl
