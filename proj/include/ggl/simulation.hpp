#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "ggl/stepping.hpp"

namespace ggl {

/// Per-step history of a run. Entry 0 is the initial state (zero multipliers,
/// zero iterations). All sequences share one length.
struct TrajectoryRecord {
  double dt = 0.0;
  std::vector<double> times;
  std::vector<GeneralizedState> states;
  std::vector<Vector> gaps;
  std::vector<Vector> gap_velocities;
  std::vector<Vector> lambdas;
  std::vector<Vector> psis;
  std::vector<double> energies;
  std::vector<ActiveSet> active_sets;
  std::vector<int> iterations;
  std::vector<char> converged;
  /// Final scaled residual norm of each step.
  std::vector<double> residuals;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  void reserve(std::size_t n);
  /// Appends a state with its multipliers; gaps and energy are evaluated here.
  void append(const MechanicalModel& model, const StepOutcome& step);
  std::size_t nonconverged_steps() const;
};

/// Number of steps of size dt in `horizon`. Throws unless dt divides the
/// horizon up to rounding.
std::size_t step_count(double horizon, double dt);

/// One scheme bound to one model. Instances hold no shared state, so
/// separate simulations can run on separate threads.
class Stepper {
 public:
  virtual ~Stepper() = default;
  virtual StepOutcome step(const GeneralizedState& state) = 0;
};

/// Checks scheme/model compatibility: contact schemes need unilateral
/// contacts, dae_* schemes a bilateral model.
void check_compatible(const MechanicalModel& model, Scheme scheme);

std::unique_ptr<Stepper> make_stepper(const MechanicalModel& model, Scheme scheme, const SolverConfig& cfg);

/// Fixed-step run over [initial.t, initial.t + t_end]. Step k is stamped
/// t_k = initial.t + k dt. Non-converged steps are kept and flagged.
TrajectoryRecord simulate(const MechanicalModel& model, Scheme scheme, const SolverConfig& cfg,
                          const GeneralizedState& initial, double t_end);

}  // namespace ggl
