#include "ggl/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ggl {

PenetrationStats penetration_stats(const TrajectoryRecord& rec) {
  if (rec.empty()) throw ContractError("penetration_stats: empty record");
  PenetrationStats stats;
  stats.per_contact_min = Vector::Constant(rec.gaps.front().size(), std::numeric_limits<double>::infinity());
  stats.min_gap = std::numeric_limits<double>::infinity();
  const double spacing = rec.size() > 1 ? rec.times[1] - rec.times[0] : rec.dt;
  std::size_t violating = 0;
  for (const Vector& g : rec.gaps) {
    if (g.size() == 0) continue;
    stats.per_contact_min = stats.per_contact_min.cwiseMin(g);
    const double lowest = g.minCoeff();
    stats.min_gap = std::min(stats.min_gap, lowest);
    if (lowest < 0.0) ++violating;
  }
  stats.violation_time = static_cast<double>(violating) * spacing;
  return stats;
}

PolynomialFit drift_fit(std::span<const double> t, std::span<const double> g, FitModel model) {
  const auto n = static_cast<Eigen::Index>(t.size());
  const int degree = static_cast<int>(model);
  const Eigen::Index p = degree + 1;
  if (t.size() != g.size()) throw ContractError("drift_fit: t and g differ in length");
  if (n < 3 || n < p) throw ContractError("drift_fit: needs at least 3 points and more than the degree");
  const auto [lo, hi] = std::minmax_element(t.begin(), t.end());
  if (!(*hi > *lo)) throw ContractError("drift_fit: degenerate input (constant t)");

  const double center = 0.5 * (*hi + *lo);
  const double width = 0.5 * (*hi - *lo);
  Matrix design(n, p);
  Vector rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = (t[static_cast<std::size_t>(i)] - center) / width;
    double power = 1.0;
    for (Eigen::Index k = 0; k < p; ++k) {
      design(i, k) = power;
      power *= s;
    }
    rhs[i] = g[static_cast<std::size_t>(i)];
  }
  const Eigen::ColPivHouseholderQR<Matrix> qr(design);
  const Vector scaled = qr.solve(rhs);
  const Vector resid = rhs - design * scaled;
  const double ssr = resid.squaredNorm();

  // c_j = sum_k b_k binom(k, j) (-center)^(k-j) / width^k
  Matrix to_raw = Matrix::Zero(p, p);
  for (Eigen::Index k = 0; k < p; ++k) {
    double binom = 1.0;
    for (Eigen::Index j = 0; j <= k; ++j) {
      if (j > 0) binom = binom * static_cast<double>(k - j + 1) / static_cast<double>(j);
      to_raw(j, k) = binom * std::pow(-center, static_cast<double>(k - j)) / std::pow(width, static_cast<double>(k));
    }
  }

  PolynomialFit fit;
  fit.coefficients = to_raw * scaled;
  fit.rms_residual = std::sqrt(ssr / static_cast<double>(n));
  fit.standard_errors = Vector::Zero(p);
  if (n > p) {
    const double sigma2 = ssr / static_cast<double>(n - p);
    const Matrix cov_scaled = sigma2 * (design.transpose() * design).inverse();
    fit.standard_errors = (to_raw * cov_scaled * to_raw.transpose()).diagonal().cwiseMax(0.0).cwiseSqrt();
  }
  return fit;
}

EnergySeries energy_series(const MechanicalModel& model, const TrajectoryRecord& rec) {
  EnergySeries out;
  out.energies.reserve(rec.size());
  for (const auto& s : rec.states) out.energies.push_back(model.energy(s.q, s.v));
  for (std::size_t k = 1; k < out.energies.size(); ++k) {
    const double jump = out.energies[k] - out.energies[k - 1];
    if (jump > out.max_increase) {
      out.max_increase = jump;
      out.max_increase_step = k;
    }
  }
  return out;
}

std::vector<ContactWindow> contact_windows(const TrajectoryRecord& rec) {
  std::vector<ContactWindow> windows;
  std::size_t begin = 0;
  for (std::size_t k = 1; k <= rec.size(); ++k) {
    if (k == rec.size() || rec.active_sets[k] != rec.active_sets[begin]) {
      windows.push_back({begin, k, rec.active_sets[begin]});
      begin = k;
    }
  }
  return windows;
}

std::vector<WindowDrift> single_contact_drifts(const TrajectoryRecord& rec, std::size_t min_length,
                                               double coincide_tol) {
  std::vector<WindowDrift> out;
  for (const auto& w : contact_windows(rec)) {
    if (w.active.empty() || w.length() < std::max<std::size_t>(min_length, 3)) continue;
    const int contact = w.active.front();
    bool distinct = false;
    for (std::size_t k = w.begin; k < w.end && !distinct; ++k) {
      for (int other : w.active) {
        if (std::abs(rec.gaps[k][other] - rec.gaps[k][contact]) > coincide_tol) distinct = true;
      }
    }
    if (distinct) continue;
    std::vector<double> t(rec.times.begin() + static_cast<std::ptrdiff_t>(w.begin),
                          rec.times.begin() + static_cast<std::ptrdiff_t>(w.end));
    std::vector<double> g;
    g.reserve(t.size());
    for (std::size_t k = w.begin; k < w.end; ++k) g.push_back(rec.gaps[k][contact]);
    out.push_back({w, contact, drift_fit(t, g, FitModel::linear)});
  }
  return out;
}

}  // namespace ggl
