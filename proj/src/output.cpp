#include "ggl/output.hpp"

#include <charconv>
#include <ostream>

#include "json.hpp"

namespace ggl {

std::string format_number(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::vector<std::string> trajectory_columns(const MechanicalModel& model) {
  const std::string name = model.name();
  if (name == "slider_unilateral") {
    return {"t",  "theta1", "theta2", "theta3", "omega1", "omega2", "omega3", "g1", "g2",
            "g3", "g4",     "gd1",    "gd2",    "gd3",    "gd4",    "L1",     "L2", "L3",
            "L4", "P1",     "P2",     "P3",     "P4",     "E",      "active_mask", "newton_iters"};
  }
  if (name == "slider_bilateral") {
    return {"t", "theta1", "theta2", "omega1", "omega2", "g", "gd", "lambda", "psi", "E", "newton_iters"};
  }
  if (name == "ball") return {"t", "q", "v", "g", "gd", "L", "P", "E", "active", "newton_iters"};

  std::vector<std::string> cols{"t"};
  auto add = [&](const char* prefix, int n) {
    for (int i = 1; i <= n; ++i) cols.push_back(prefix + std::to_string(i));
  };
  add("q", model.dof());
  add("v", model.dof());
  add("g", model.contact_count());
  add("gd", model.contact_count());
  add("L", model.contact_count());
  add("P", model.contact_count());
  cols.insert(cols.end(), {"E", "active_mask", "newton_iters"});
  return cols;
}

std::vector<double> trajectory_row(const MechanicalModel& model, const TrajectoryRecord& rec, std::size_t k) {
  std::vector<double> row;
  const auto& s = rec.states[k];
  auto append = [&](const Vector& v) { row.insert(row.end(), v.begin(), v.end()); };
  row.push_back(rec.times[k]);
  append(s.q);
  append(s.v);
  append(rec.gaps[k]);
  append(rec.gap_velocities[k]);
  append(rec.lambdas[k]);
  append(rec.psis[k]);
  row.push_back(rec.energies[k]);
  if (!model.bilateral()) {
    long mask = 0;
    for (int i : rec.active_sets[k]) mask |= 1L << i;
    row.push_back(static_cast<double>(mask));
  }
  row.push_back(static_cast<double>(rec.iterations[k]));
  return row;
}

std::vector<std::size_t> recorded_rows(const TrajectoryRecord& rec, int stride) {
  std::vector<std::size_t> rows;
  const auto step = static_cast<std::size_t>(stride < 1 ? 1 : stride);
  for (std::size_t k = 0; k < rec.size(); k += step) rows.push_back(k);
  return rows;
}

void write_trajectory_csv(std::ostream& out, const MechanicalModel& model, const TrajectoryRecord& rec, int stride) {
  const auto cols = trajectory_columns(model);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (std::size_t k : recorded_rows(rec, stride)) {
    const auto row = trajectory_row(model, rec, k);
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
}

void write_trajectory_json(std::ostream& out, const MechanicalModel& model, const TrajectoryRecord& rec,
                           int stride) {
  nlohmann::json doc;
  doc["columns"] = trajectory_columns(model);
  auto rows = nlohmann::json::array();
  for (std::size_t k : recorded_rows(rec, stride)) rows.push_back(trajectory_row(model, rec, k));
  doc["rows"] = std::move(rows);
  out << doc.dump() << '\n';
}

}  // namespace ggl
