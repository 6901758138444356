#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ggl/simulation.hpp"

namespace ggl {

struct PenetrationStats {
  double min_gap = 0.0;
  /// Time spent with min_i g_i < 0, counted in whole record intervals.
  double violation_time = 0.0;
  Vector per_contact_min;
};

/// Throws ContractError on an empty record.
PenetrationStats penetration_stats(const TrajectoryRecord& rec);

enum class FitModel { constant = 0, linear = 1, quadratic = 2 };

/// Ordinary least-squares polynomial fit g(t) ~ sum_k c_k t^k.
struct PolynomialFit {
  Vector coefficients;     // ascending powers of t
  Vector standard_errors;  // of the coefficients; zero when n == degree + 1
  double rms_residual = 0.0;
};

/// Needs at least 3 points (and more than the degree) and a non-constant t.
/// The fit is computed on centered and scaled time, so the residual does
/// not depend on a shift of t.
PolynomialFit drift_fit(std::span<const double> t, std::span<const double> g, FitModel model);

struct EnergySeries {
  std::vector<double> energies;
  /// max_k (E_{k+1} - E_k), 0 for fewer than two entries or a non-increasing series.
  double max_increase = 0.0;
  std::size_t max_increase_step = 0;  // k + 1 of the largest increase
};

/// Recomputes E(q_k, v_k) from the stored states only.
EnergySeries energy_series(const MechanicalModel& model, const TrajectoryRecord& rec);

/// Maximal run of consecutive records [begin, end) sharing one active set.
struct ContactWindow {
  std::size_t begin = 0;
  std::size_t end = 0;
  ActiveSet active;

  std::size_t length() const { return end - begin; }
};

std::vector<ContactWindow> contact_windows(const TrajectoryRecord& rec);

/// Linear fit of the closed contact's gap over a window where exactly one
/// contact stays active. Active contacts whose gaps coincide over the whole
/// window (to `coincide_tol`) count as one contact.
struct WindowDrift {
  ContactWindow window;
  int contact = -1;
  PolynomialFit fit;

  double slope() const { return fit.coefficients[1]; }
  double slope_error() const { return fit.standard_errors[1]; }
};

std::vector<WindowDrift> single_contact_drifts(const TrajectoryRecord& rec, std::size_t min_length,
                                               double coincide_tol = 1e-12);

}  // namespace ggl
