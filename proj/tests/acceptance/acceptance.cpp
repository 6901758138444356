// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--known-red 3,6]
//
// Exit status is 1 if a criterion fails that is not listed as known red.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "ggl/bilateral.hpp"
#include "ggl/diagnostics.hpp"
#include "ggl/experiment.hpp"
#include "ggl/models.hpp"
#include "ggl/prox.hpp"
#include "ggl/simulation.hpp"
#include "ggl/unified_stepper.hpp"

using namespace ggl;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

SolverConfig with_dt(double dt) {
  SolverConfig cfg;
  cfg.dt = dt;
  return cfg;
}

struct TimedRecord {
  TrajectoryRecord rec;
  double wall = 0.0;
};

TimedRecord timed_simulation(const MechanicalModel& model, Scheme scheme, const SolverConfig& cfg,
                             const GeneralizedState& initial, double t_end) {
  const auto start = std::chrono::steady_clock::now();
  TimedRecord out{simulate(model, scheme, cfg, initial, t_end), 0.0};
  out.wall = seconds_since(start);
  return out;
}

// Cached runs shared between criteria.
const UnilateralSliderCrank& slider() {
  static const UnilateralSliderCrank model({}, 0.1);
  return model;
}

const TimedRecord& slider_run(Scheme scheme, double t_end) {
  static std::map<std::pair<Scheme, double>, TimedRecord> cache;
  auto it = cache.find({scheme, t_end});
  if (it == cache.end()) {
    it = cache.emplace(std::make_pair(scheme, t_end),
                       timed_simulation(slider(), scheme, with_dt(1e-5), slider_crank_initial_state(true), t_end))
             .first;
  }
  return it->second;
}

Verdict drift_off_under_moreau() {
  const auto& run = slider_run(Scheme::moreau, 0.5);
  const double min_gap = penetration_stats(run.rec).min_gap;
  const auto drifts = single_contact_drifts(run.rec, 50);
  int significant = 0;
  double best_ratio = 0.0;
  for (const auto& d : drifts) {
    if (d.slope() < 0.0 && -d.slope() > 10.0 * d.slope_error()) ++significant;
    if (d.slope() < 0.0 && d.slope_error() > 0.0) best_ratio = std::max(best_ratio, -d.slope() / d.slope_error());
  }
  std::size_t strict = 0;
  for (const auto& w : contact_windows(run.rec)) strict += w.active.size() == 1 ? 1 : 0;
  const bool pass = min_gap < -1e-5 && significant > 0 && run.wall < 60.0;
  return {pass, fmt("min gap %.3e m; %d of %zu closed-contact windows drift down (best |slope| = %.0f SE); "
                    "strictly one-index windows: %zu; %.2f s",
                    min_gap, significant, drifts.size(), best_ratio, strict, run.wall)};
}

Verdict non_penetration_under_unified() {
  const auto& run = slider_run(Scheme::ggl_unified, 0.5);
  const double min_gap = penetration_stats(run.rec).min_gap;
  double worst_residual = 0.0;
  for (double r : run.rec.residuals) worst_residual = std::max(worst_residual, r);
  const std::size_t failed = run.rec.nonconverged_steps();
  const bool pass = min_gap >= -1e-9 && worst_residual <= 1e-8 && failed == 0;
  return {pass, fmt("min exact gap %.3e m; max scaled residual %.2e; %zu non-converged steps; %.2f s", min_gap,
                    worst_residual, failed, run.wall)};
}

Verdict decoupled_energy_defect() {
  const auto& dec = slider_run(Scheme::ggl_decoupled, 0.2);
  const auto& uni = slider_run(Scheme::ggl_unified, 0.2);
  const auto de = energy_series(slider(), dec.rec);
  const auto ue = energy_series(slider(), uni.rec);
  const double e0 = de.energies.front();
  const double threshold = 1e-3 * e0;
  const bool decoupled_jumps = de.max_increase > threshold;
  const bool unified_clean = ue.max_increase <= threshold && ue.energies.back() <= ue.energies.front();
  return {decoupled_jumps && unified_clean,
          fmt("decoupled max step gain %.3e J (%s %.3e J); unified max step gain %.3e J, E(end)-E(0) = %.3e J",
              de.max_increase, decoupled_jumps ? ">" : "<=", threshold, ue.max_increase,
              ue.energies.back() - ue.energies.front())};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("ggl_acceptance_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

const SweepResult& energy_sweep() {
  static const SweepResult sweep = run_preset(preset("fig10_energy"), scratch("fig10"), 1);
  return sweep;
}

Verdict energy_ordering() {
  const auto& sweep = energy_sweep();
  if (sweep.exit_code != 0) return {false, fmt("preset fig10_energy exited with %d", sweep.exit_code)};
  double lo = INFINITY, hi = -INFINITY;
  bool below = true;
  std::string finals;
  for (const auto& r : sweep.runs) {
    lo = std::min(lo, r.summary.energy_final);
    hi = std::max(hi, r.summary.energy_final);
    below = below && r.summary.energy_final <= r.summary.energy_initial;
    finals += fmt("%s %.4f J, ", r.summary.scheme.c_str(), r.summary.energy_final);
  }
  const double spread = hi / lo - 1.0;
  return {spread <= 0.05 && below,
          finals + fmt("spread %.2f%%, all <= E0 = %.4f J: %s", 100 * spread, sweep.runs[0].summary.energy_initial,
                       below ? "yes" : "no")};
}

Verdict bilateral_drift() {
  const BilateralSliderCrank model;
  const auto start = std::chrono::steady_clock::now();
  const auto initial = slider_crank_initial_state(false);
  const SolverConfig cfg = with_dt(1e-4);
  auto magnitude = [](const DriftSeries& s) {
    std::vector<double> a(s.g.size());
    std::transform(s.g.begin(), s.g.end(), a.begin(), [](double x) { return std::abs(x); });
    return a;
  };
  const auto vel = drift_series(model, BilateralScheme::velocity, cfg, initial, 5.0);
  const auto acc = drift_series(model, BilateralScheme::acceleration, cfg, initial, 5.0);
  const auto ggl = drift_series(model, BilateralScheme::ggl, cfg, initial, 5.0);
  const double wall = seconds_since(start);

  const auto va = magnitude(vel);
  const double vel_const = drift_fit(vel.t, va, FitModel::constant).rms_residual;
  const double vel_lin = drift_fit(vel.t, va, FitModel::linear).rms_residual;
  const auto aa = magnitude(acc);
  const double acc_lin = drift_fit(acc.t, aa, FitModel::linear).rms_residual;
  const double acc_quad = drift_fit(acc.t, aa, FitModel::quadratic).rms_residual;
  double ggl_max = 0.0;
  for (double g : ggl.g) ggl_max = std::max(ggl_max, std::abs(g));

  const bool pass = vel_lin < 0.5 * vel_const && acc_quad < 0.5 * acc_lin && ggl_max <= 1e-8 && wall < 60.0 &&
                    vel.converged && acc.converged && ggl.converged;
  return {pass, fmt("dae_vel rms lin/const %.3f; dae_acc rms quad/lin %.3f; dae_ggl max|g| %.2e m; %.2f s",
                    vel_lin / vel_const, acc_quad / acc_lin, ggl_max, wall)};
}

Verdict bouncing_ball() {
  const BouncingBall ball;
  const double expected = std::sqrt(2.0 * ball.params().gravity * ball.params().height);
  const double eps = ball.params().restitution;
  bool pass = true;
  std::string detail;
  for (Scheme scheme : {Scheme::moreau, Scheme::ggl_decoupled, Scheme::ggl_unified}) {
    const auto rec = simulate(ball, scheme, with_dt(1e-4), ball.initial_state(), 1.0);
    std::size_t k = 1;
    while (k < rec.size() && !(rec.states[k].v[0] > 0.0 && rec.states[k - 1].v[0] < 0.0)) ++k;
    if (k == rec.size()) {
      pass = false;
      detail += fmt("%s: no impact; ", std::string(to_string(scheme)).c_str());
      continue;
    }
    const double pre = -rec.states[k - 1].v[0];
    const double post = rec.states[k].v[0];
    const double speed_error = std::abs(pre - expected) / expected;
    const double ratio_error = std::abs(post / pre - eps) / eps;
    pass = pass && speed_error <= 0.01 && ratio_error <= 0.02 && rec.nonconverged_steps() == 0;
    detail += fmt("%s: impact speed %+.2f%%, ratio %+.2f%%", std::string(to_string(scheme)).c_str(),
                  100 * (pre - expected) / expected, 100 * (post / pre - eps) / eps);
    if (scheme == Scheme::ggl_unified) {
      double q_min = INFINITY;
      for (const auto& s : rec.states) q_min = std::min(q_min, s.q[0]);
      const double q_end = rec.states.back().q[0];
      const double v_end = rec.states.back().v[0];
      const bool rest = std::abs(q_end) <= 1e-8 && std::abs(v_end) <= 1e-6;
      pass = pass && q_min >= -1e-9 && rest;
      detail += fmt(", min q %.2e m, end q %.3e m, end v %.1e m/s", q_min, q_end, v_end);
    }
    detail += "; ";
  }
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

Verdict jacobian_oracle() {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&](Eigen::Index n, double lo, double hi) {
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = lo + (hi - lo) * unit(rng);
    return x;
  };
  const UnilateralSliderCrank slider_model({}, 0.3);
  const BouncingBall ball;
  double worst = 0.0;
  int states = 0;
  std::string detail;
  for (const MechanicalModel* model : {static_cast<const MechanicalModel*>(&slider_model),
                                       static_cast<const MechanicalModel*>(&ball)}) {
    double model_worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      GeneralizedState s{0.0, draw(model->dof(), -3.0, 3.0), draw(model->dof(), -50.0, 50.0)};
      if (model->dof() == 3) s.q[2] *= 0.003;
      ActiveSet active;
      for (int i = 0; i < model->contact_count(); ++i) active.push_back(i);
      const double dt = 1e-3;
      const UnifiedSystem sys(*model, s, active, with_dt(dt));
      UnifiedUnknowns x = sys.initial_guess();
      x.q_next += draw(model->dof(), -1e-3, 1e-3);
      x.v_next += draw(model->dof(), -1.0, 1.0);
      x.lambda = draw(sys.active_count(), 0.0, 1.0);
      x.psi = draw(sys.active_count(), 0.0, 1e-3);
      const Matrix a = sys.jacobian(x);
      const Matrix f = sys.finite_difference_jacobian(x);
      for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const double scale = f.row(i).cwiseAbs().maxCoeff();
        if (scale == 0.0) {
          model_worst = std::max(model_worst, a.row(i).cwiseAbs().maxCoeff());
          continue;
        }
        model_worst = std::max(model_worst, (a.row(i) - f.row(i)).cwiseAbs().maxCoeff() / scale);
      }
      ++states;
    }
    worst = std::max(worst, model_worst);
    detail += fmt("%s %.2e, ", model->name().c_str(), model_worst);
  }
  return {worst <= 1e-5, fmt("%d states; max row-relative entry error: ", states) + detail.substr(0, detail.size() - 2)};
}

Verdict prox_suite() {
  int failures = 0, checks = 0;
  auto expect = [&](double got, double want) {
    ++checks;
    if (got != want) ++failures;
  };
  const auto r1 = ProxParams::uniform(1);
  auto v = [](double x) { return Vector::Constant(1, x); };
  expect(prox_nonneg(-3.2), 0.0);
  expect(prox_nonneg(0.0), 0.0);
  expect(prox_nonneg(7.5), 7.5);
  expect(impact_residual(v(0), v(1), v(0), v(0.5), r1)[0], 0.0);
  expect(impact_residual(v(2), v(0), v(0), v(0.5), r1)[0], 0.0);
  expect(impact_residual(v(1), v(-0.5), v(-1), v(0.5), r1)[0], -1.0);
  expect(position_residual(v(0), v(1e-3), r1)[0], 0.0);
  expect(position_residual(v(0.2), v(0), r1)[0], 0.0);
  expect(position_residual(v(0), v(-1e-3), r1)[0], -1e-3);

  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int invariance_failures = 0;
  for (int k = 0; k < 1000; ++k) {
    double lambda = std::abs(u(rng)), s = std::abs(u(rng));
    const bool root = k % 2 == 0;
    if (root) {
      (k % 4 == 0 ? lambda : s) = 0.0;
    } else {
      s = k % 3 == 0 ? -s : s;
    }
    const double eps = 0.5 * (u(rng) + 1.0), gd_now = u(rng);
    int zero = 0;
    for (double r : {1e-2, 1.0, 1e2}) {
      const double res = impact_residual(v(lambda), v(s - eps * gd_now), v(gd_now), v(eps), ProxParams::uniform(1, r))[0];
      zero += std::abs(res) <= 1e-12 ? 1 : 0;
    }
    if (zero != 0 && zero != 3) ++invariance_failures;
    if (root && zero != 3) ++invariance_failures;
  }
  return {failures == 0 && invariance_failures == 0,
          fmt("%d/%d examples exact; r-invariance violations over r in {1e-2, 1, 1e2}: %d of 1000 cases",
              checks - failures, checks, invariance_failures)};
}

Verdict cost_factor() {
  const auto& sweep = energy_sweep();
  if (!sweep.unified_over_moreau) return {false, "ratio missing from the fig10_energy summary"};
  std::ifstream in(sweep.summary_path);
  std::stringstream text;
  text << in.rdbuf();
  const bool reported = text.str().find("wall_time_ratio_unified_over_moreau") != std::string::npos;
  const double ratio = *sweep.unified_over_moreau;
  return {ratio > 2.0 && reported,
          fmt("ggl_unified/moreau wall time %.2f at dt = 1e-5 (%s)", ratio,
              reported ? "in fig10_energy.summary.json" : "not in summary")};
}

Verdict determinism() {
  std::string contents[2];
  for (int i = 0; i < 2; ++i) {
    const auto dir = scratch("det" + std::to_string(i));
    const auto sweep = run_preset(preset("fig3_eps01"), dir, 1);
    if (sweep.exit_code != 0) return {false, "fig3_eps01 failed"};
    std::ifstream in(sweep.runs.front().trajectory_path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    contents[i] = s.str();
  }
  const bool same = !contents[0].empty() && contents[0] == contents[1];
  return {same, fmt("two fig3_eps01 runs: %zu bytes each, %s", contents[0].size(), same ? "identical" : "differ")};
}

std::set<int> parse_list(const char* text) {
  std::set<int> out;
  std::stringstream s(text);
  for (std::string item; std::getline(s, item, ',');) {
    if (!item.empty()) out.insert(std::stoi(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known_red;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--known-red") == 0 && i + 1 < argc) {
      known_red = parse_list(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--known-red 3,6]\n");
      return 1;
    }
  }

  const std::pair<const char*, std::function<Verdict()>> criteria[] = {
      {"drift-off under Moreau's rule", drift_off_under_moreau},
      {"non-penetration under unified GGL", non_penetration_under_unified},
      {"decoupled energy inconsistency", decoupled_energy_defect},
      {"energy ordering at 0.5 s", energy_ordering},
      {"bilateral drift characterization", bilateral_drift},
      {"bouncing-ball oracle", bouncing_ball},
      {"Jacobian oracle", jacobian_oracle},
      {"prox and impact-law suite", prox_suite},
      {"cost factor", cost_factor},
      {"determinism", determinism},
  };

  int unexpected = 0, passed = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const bool known = known_red.count(index) > 0;
    std::printf("[%s] %2d %s: %s%s\n", v.pass ? "PASS" : "FAIL", index, name, v.detail.c_str(),
                !v.pass && known ? " (known red)" : (v.pass && known ? " (listed as known red)" : ""));
    std::fflush(stdout);
    passed += v.pass ? 1 : 0;
    if (!v.pass && !known) ++unexpected;
  }
  std::printf("%d/%zu criteria pass\n", passed, std::size(criteria));
  return unexpected == 0 ? 0 : 1;
}
