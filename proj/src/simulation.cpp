#include "ggl/simulation.hpp"

#include <cmath>

#include "ggl/bilateral.hpp"
#include "ggl/explicit_steppers.hpp"
#include "ggl/unified_stepper.hpp"

namespace ggl {

void TrajectoryRecord::reserve(std::size_t n) {
  times.reserve(n);
  states.reserve(n);
  gaps.reserve(n);
  gap_velocities.reserve(n);
  lambdas.reserve(n);
  psis.reserve(n);
  energies.reserve(n);
  active_sets.reserve(n);
  iterations.reserve(n);
  converged.reserve(n);
  residuals.reserve(n);
}

void TrajectoryRecord::append(const MechanicalModel& model, const StepOutcome& step) {
  const auto& s = step.state;
  times.push_back(s.t);
  states.push_back(s);
  gaps.push_back(model.gaps(s.q));
  gap_velocities.push_back(model.gap_velocities(s.q, s.v));
  lambdas.push_back(step.lambda.size() ? step.lambda : Vector::Zero(model.contact_count()));
  psis.push_back(step.psi.size() ? step.psi : Vector::Zero(model.contact_count()));
  energies.push_back(model.energy(s.q, s.v));
  active_sets.push_back(step.active);
  iterations.push_back(step.iterations);
  converged.push_back(step.converged ? 1 : 0);
  residuals.push_back(step.residual);
}

std::size_t TrajectoryRecord::nonconverged_steps() const {
  std::size_t n = 0;
  for (char c : converged) n += c ? 0 : 1;
  return n;
}

std::size_t step_count(double horizon, double dt) {
  if (!(dt > 0.0) || !(horizon >= 0.0) || !std::isfinite(horizon)) {
    throw ContractError("horizon must be >= 0 and dt > 0");
  }
  const double ratio = horizon / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw ContractError("dt does not divide the horizon");
  }
  return static_cast<std::size_t>(rounded);
}

void check_compatible(const MechanicalModel& model, Scheme scheme) {
  if (is_contact_scheme(scheme)) {
    if (model.bilateral()) {
      throw ContractError("scheme " + std::string(to_string(scheme)) + " requires a model with unilateral contacts");
    }
  } else if (!model.bilateral()) {
    throw ContractError("scheme " + std::string(to_string(scheme)) + " requires model slider_bilateral");
  }
}

namespace {

class FunctionStepper final : public Stepper {
 public:
  using Fn = StepOutcome (*)(const MechanicalModel&, const GeneralizedState&, const SolverConfig&);
  FunctionStepper(const MechanicalModel& model, SolverConfig cfg, Fn fn) : model_(model), cfg_(cfg), fn_(fn) {}
  StepOutcome step(const GeneralizedState& state) override { return fn_(model_, state, cfg_); }

 private:
  const MechanicalModel& model_;
  SolverConfig cfg_;
  Fn fn_;
};

class BilateralStepper final : public Stepper {
 public:
  BilateralStepper(const MechanicalModel& model, SolverConfig cfg, BilateralScheme scheme)
      : model_(model), cfg_(cfg), scheme_(scheme) {}
  StepOutcome step(const GeneralizedState& state) override { return bilateral_step(model_, state, scheme_, cfg_); }

 private:
  const MechanicalModel& model_;
  SolverConfig cfg_;
  BilateralScheme scheme_;
};

StepOutcome unified_outcome(const MechanicalModel& m, const GeneralizedState& s, const SolverConfig& c) {
  return unified_step(m, s, c).outcome;
}

StepOutcome reference_outcome(const MechanicalModel& m, const GeneralizedState& s, const SolverConfig& c) {
  return reference_step(m, s, c).outcome;
}

}  // namespace

std::unique_ptr<Stepper> make_stepper(const MechanicalModel& model, Scheme scheme, const SolverConfig& cfg) {
  cfg.validate();
  check_compatible(model, scheme);
  switch (scheme) {
    case Scheme::moreau:
      return std::make_unique<FunctionStepper>(model, cfg, &moreau_step);
    case Scheme::ggl_decoupled:
      return std::make_unique<FunctionStepper>(model, cfg, &decoupled_ggl_step);
    case Scheme::ggl_unified:
      return std::make_unique<FunctionStepper>(model, cfg, &unified_outcome);
    case Scheme::ggl_reference:
      return std::make_unique<FunctionStepper>(model, cfg, &reference_outcome);
    default:
      return std::make_unique<BilateralStepper>(model, cfg, bilateral_scheme_of(scheme));
  }
}

TrajectoryRecord simulate(const MechanicalModel& model, Scheme scheme, const SolverConfig& cfg,
                          const GeneralizedState& initial, double t_end) {
  model.check_state(initial.q, initial.v);
  const std::size_t steps = step_count(t_end, cfg.dt);
  auto stepper = make_stepper(model, scheme, cfg);

  TrajectoryRecord rec;
  rec.dt = cfg.dt;
  rec.reserve(steps + 1);
  StepOutcome start;
  start.state = initial;
  rec.append(model, start);

  GeneralizedState s = initial;
  for (std::size_t k = 1; k <= steps; ++k) {
    StepOutcome out = stepper->step(s);
    out.state.t = initial.t + static_cast<double>(k) * cfg.dt;
    rec.append(model, out);
    s = std::move(out.state);
  }
  return rec;
}

}  // namespace ggl
