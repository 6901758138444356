#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ggl/bilateral.hpp"
#include "ggl/config.hpp"
#include "ggl/diagnostics.hpp"
#include "ggl/experiment.hpp"
#include "ggl/explicit_steppers.hpp"
#include "ggl/models.hpp"
#include "ggl/prox.hpp"
#include "ggl/simulation.hpp"
#include "ggl/unified_stepper.hpp"

namespace py = pybind11;
using namespace ggl;

namespace {

// Stacks per-step vectors into a (steps x n) array.
Matrix stack(const std::vector<Vector>& rows, Eigen::Index width) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), width);
  for (std::size_t k = 0; k < rows.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = rows[k].transpose();
  return out;
}

py::dict record_to_dict(const MechanicalModel& model, const TrajectoryRecord& rec) {
  std::vector<Vector> q, v;
  for (const auto& s : rec.states) {
    q.push_back(s.q);
    v.push_back(s.v);
  }
  const Eigen::Index nc = model.contact_count();
  py::dict d;
  d["t"] = Eigen::Map<const Vector>(rec.times.data(), static_cast<Eigen::Index>(rec.times.size())).eval();
  d["q"] = stack(q, model.dof());
  d["v"] = stack(v, model.dof());
  d["g"] = stack(rec.gaps, nc);
  d["gd"] = stack(rec.gap_velocities, nc);
  d["lambda"] = stack(rec.lambdas, nc);
  d["psi"] = stack(rec.psis, nc);
  d["energy"] = Eigen::Map<const Vector>(rec.energies.data(), static_cast<Eigen::Index>(rec.energies.size())).eval();
  d["active"] = rec.active_sets;
  d["iterations"] = rec.iterations;
  d["converged"] = std::vector<bool>(rec.converged.begin(), rec.converged.end());
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Timestepping schemes for impacting mechanical systems";

  py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::enum_<Scheme>(m, "Scheme")
      .value("moreau", Scheme::moreau)
      .value("ggl_decoupled", Scheme::ggl_decoupled)
      .value("ggl_unified", Scheme::ggl_unified)
      .value("ggl_reference", Scheme::ggl_reference)
      .value("dae_pos", Scheme::dae_pos)
      .value("dae_vel", Scheme::dae_vel)
      .value("dae_acc", Scheme::dae_acc)
      .value("dae_ggl", Scheme::dae_ggl);

  py::enum_<ProxWeighting>(m, "ProxWeighting")
      .value("delassus", ProxWeighting::delassus)
      .value("unit", ProxWeighting::unit)
      .value("scalar", ProxWeighting::scalar);

  py::enum_<BilateralScheme>(m, "BilateralScheme")
      .value("position", BilateralScheme::position)
      .value("velocity", BilateralScheme::velocity)
      .value("acceleration", BilateralScheme::acceleration)
      .value("ggl", BilateralScheme::ggl);

  py::enum_<FitModel>(m, "FitModel")
      .value("constant", FitModel::constant)
      .value("linear", FitModel::linear)
      .value("quadratic", FitModel::quadratic);

  py::class_<GeneralizedState>(m, "State")
      .def(py::init<>())
      .def(py::init([](double t, Vector q, Vector v) { return GeneralizedState{t, std::move(q), std::move(v)}; }),
           py::arg("t"), py::arg("q"), py::arg("v"))
      .def_readwrite("t", &GeneralizedState::t)
      .def_readwrite("q", &GeneralizedState::q)
      .def_readwrite("v", &GeneralizedState::v);

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init([](double dt, double newton_tol, int max_iter, double active_tol, ProxWeighting weighting,
                       double prox_value, bool reactivate_penetrating) {
             SolverConfig c{dt, newton_tol, max_iter, active_tol, weighting, prox_value, reactivate_penetrating};
             c.validate();
             return c;
           }),
           py::arg("dt") = 1e-5, py::arg("newton_tol") = 1e-10, py::arg("max_iter") = 50,
           py::arg("active_tol") = 0.0, py::arg("weighting") = ProxWeighting::delassus, py::arg("prox_value") = 1.0,
           py::arg("reactivate_penetrating") = true)
      .def_readwrite("dt", &SolverConfig::dt)
      .def_readwrite("newton_tol", &SolverConfig::newton_tol)
      .def_readwrite("max_iter", &SolverConfig::max_iter)
      .def_readwrite("active_tol", &SolverConfig::active_tol)
      .def_readwrite("weighting", &SolverConfig::weighting)
      .def_readwrite("prox_value", &SolverConfig::prox_value)
      .def_readwrite("reactivate_penetrating", &SolverConfig::reactivate_penetrating);

  py::class_<StepOutcome>(m, "StepOutcome")
      .def_readonly("state", &StepOutcome::state)
      .def_readonly("lambda_", &StepOutcome::lambda)
      .def_readonly("psi", &StepOutcome::psi)
      .def_readonly("active", &StepOutcome::active)
      .def_readonly("iterations", &StepOutcome::iterations)
      .def_readonly("converged", &StepOutcome::converged)
      .def_readonly("residual", &StepOutcome::residual);

  py::class_<MechanicalModel>(m, "MechanicalModel")
      .def_property_readonly("name", &MechanicalModel::name)
      .def_property_readonly("dof", &MechanicalModel::dof)
      .def_property_readonly("contact_count", &MechanicalModel::contact_count)
      .def_property_readonly("bilateral", &MechanicalModel::bilateral)
      .def_property_readonly("restitution", &MechanicalModel::restitution)
      .def("mass", &MechanicalModel::mass, py::arg("q"))
      .def("forces", &MechanicalModel::forces, py::arg("q"), py::arg("v"))
      .def("gaps", &MechanicalModel::gaps, py::arg("q"))
      .def("gap_jacobian", &MechanicalModel::gap_jacobian, py::arg("q"))
      .def("gap_velocities", &MechanicalModel::gap_velocities, py::arg("q"), py::arg("v"))
      .def("potential", &MechanicalModel::potential, py::arg("q"))
      .def("energy", &MechanicalModel::energy, py::arg("q"), py::arg("v"));

  py::class_<UnilateralSliderCrank, MechanicalModel>(m, "UnilateralSliderCrank")
      .def(py::init([](double eps) { return UnilateralSliderCrank(SliderCrankParams{}, eps); }), py::arg("epsilon") = 0.1)
      .def("slider_height", &UnilateralSliderCrank::slider_height);
  py::class_<BilateralSliderCrank, MechanicalModel>(m, "BilateralSliderCrank")
      .def(py::init<>())
      .def("slider_height", &BilateralSliderCrank::slider_height);
  py::class_<BouncingBall, MechanicalModel>(m, "BouncingBall")
      .def(py::init([](double mass, double gravity, double height, double eps) {
             return BouncingBall(BouncingBallParams{mass, gravity, height, eps});
           }),
           py::arg("mass") = 1.0, py::arg("gravity") = 9.81, py::arg("height") = 0.1, py::arg("epsilon") = 0.5)
      .def("initial_state", &BouncingBall::initial_state);

  m.def("slider_crank_initial_state", &slider_crank_initial_state, py::arg("unilateral") = true);

  m.def("prox", &prox_nonneg, py::arg("x"));
  m.def(
      "impact_residual",
      [](const Vector& lambda, const Vector& gd_next, const Vector& gd_now, const Vector& eps, const Vector& r) {
        return impact_residual(lambda, gd_next, gd_now, eps, ProxParams(r));
      },
      py::arg("lambda_"), py::arg("gd_next"), py::arg("gd_now"), py::arg("eps"), py::arg("r"));
  m.def(
      "position_residual",
      [](const Vector& psi, const Vector& g_next, const Vector& r) { return position_residual(psi, g_next, ProxParams(r)); },
      py::arg("psi"), py::arg("g_next"), py::arg("r"));

  m.def("predict_active_set", &predict_active_set, py::arg("model"), py::arg("state"), py::arg("dt"),
        py::arg("active_tol") = 0.0);
  m.def("moreau_step", &moreau_step, py::arg("model"), py::arg("state"), py::arg("config"));
  m.def("decoupled_ggl_step", &decoupled_ggl_step, py::arg("model"), py::arg("state"), py::arg("config"));
  m.def(
      "unified_step",
      [](const MechanicalModel& model, const GeneralizedState& s, const SolverConfig& c) {
        return unified_step(model, s, c).outcome;
      },
      py::arg("model"), py::arg("state"), py::arg("config"));
  m.def(
      "reference_step",
      [](const MechanicalModel& model, const GeneralizedState& s, const SolverConfig& c) {
        return reference_step(model, s, c).outcome;
      },
      py::arg("model"), py::arg("state"), py::arg("config"));
  m.def("bilateral_step", &bilateral_step, py::arg("model"), py::arg("state"), py::arg("scheme"), py::arg("config"));

  m.def(
      "simulate",
      [](const MechanicalModel& model, Scheme scheme, const SolverConfig& cfg, const GeneralizedState& initial,
         double t_end) {
        TrajectoryRecord rec;
        {
          py::gil_scoped_release release;
          rec = simulate(model, scheme, cfg, initial, t_end);
        }
        return record_to_dict(model, rec);
      },
      py::arg("model"), py::arg("scheme"), py::arg("config"), py::arg("initial"), py::arg("t_end"),
      "Trajectory as a dict of numpy arrays (t, q, v, g, gd, lambda, psi, energy) and per-step lists.");

  m.def(
      "drift_fit",
      [](const std::vector<double>& t, const std::vector<double>& g, FitModel model) {
        const auto fit = drift_fit(t, g, model);
        return py::make_tuple(fit.coefficients, fit.standard_errors, fit.rms_residual);
      },
      py::arg("t"), py::arg("g"), py::arg("model") = FitModel::linear,
      "(coefficients in ascending powers, standard errors, rms residual)");

  m.def("parse_config", [](const std::string& text) { return serialize_config(parse_config(text)); },
        py::arg("text"), "Validates a configuration and returns it in canonical form.");
  m.def(
      "run_config",
      [](const std::string& text) {
        RunResult r;
        {
          const RunConfig cfg = parse_config(text);
          py::gil_scoped_release release;
          r = run_experiment(cfg);
        }
        if (r.exit_code == 1) throw std::runtime_error(r.error);
        return py::make_tuple(r.exit_code, r.trajectory_path, r.summary_path);
      },
      py::arg("text"), "Runs a key=value configuration; returns (exit code, trajectory path, summary path).");
  m.def("preset_names", &preset_names);
}
