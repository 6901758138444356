#include <cmath>
#include <vector>

#include "doctest.h"
#include "ggl/diagnostics.hpp"
#include "ggl/models.hpp"
#include "ggl/simulation.hpp"

using namespace ggl;

namespace {

// Ball record with the given heights, spaced dt apart, at rest.
TrajectoryRecord ball_record(const BouncingBall& ball, const std::vector<double>& heights, double dt) {
  TrajectoryRecord rec;
  rec.dt = dt;
  for (std::size_t k = 0; k < heights.size(); ++k) {
    StepOutcome step;
    step.state = {static_cast<double>(k) * dt, Vector::Constant(1, heights[k]), Vector::Zero(1)};
    if (heights[k] <= 0.0) step.active = {0};
    rec.append(ball, step);
  }
  return rec;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = a + (b - a) * i / (n - 1);
  return t;
}

}  // namespace

TEST_SUITE("diagnostics") {
  TEST_CASE("penetration statistics") {
    const BouncingBall ball;
    auto stats = penetration_stats(ball_record(ball, {0.3, 0.2, 0.1}, 1e-3));
    CHECK(stats.min_gap == 0.1);
    CHECK(stats.violation_time == 0.0);
    stats = penetration_stats(ball_record(ball, {0.3, -2e-4, 0.1}, 1e-3));
    CHECK(stats.min_gap == -2e-4);
    CHECK(stats.violation_time == 1e-3);
    CHECK(stats.per_contact_min[0] == -2e-4);
    CHECK_THROWS_AS(penetration_stats(TrajectoryRecord{}), ContractError);
  }

  TEST_CASE("polynomial fits") {
    const auto t = linspace(0.0, 1.0, 21);
    std::vector<double> line, parabola;
    for (double x : t) {
      line.push_back(2.0 * x);
      parabola.push_back(x * x);
    }
    const auto lf = drift_fit(t, line, FitModel::linear);
    CHECK(lf.coefficients[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(lf.coefficients[0]) <= 1e-13);
    CHECK(lf.rms_residual <= 1e-14);
    CHECK(drift_fit(t, parabola, FitModel::quadratic).rms_residual <= 1e-14);
    CHECK(drift_fit(t, parabola, FitModel::linear).rms_residual > 1e-3);
    CHECK(drift_fit(t, parabola, FitModel::constant).coefficients.size() == 1);
  }

  TEST_CASE("fit residual does not depend on a time shift") {
    const auto t = linspace(0.0, 2.0, 101);
    std::vector<double> g, shifted;
    for (double x : t) {
      g.push_back(std::sin(3.0 * x) + 0.1 * x);
      shifted.push_back(x + 1e3);
    }
    for (auto model : {FitModel::linear, FitModel::quadratic}) {
      const auto a = drift_fit(t, g, model);
      const auto b = drift_fit(shifted, g, model);
      CHECK(std::abs(a.rms_residual - b.rms_residual) <= 1e-12);
    }
    // re-expansion of the shifted line
    const auto a = drift_fit(t, g, FitModel::linear);
    const auto b = drift_fit(shifted, g, FitModel::linear);
    CHECK(b.coefficients[1] == doctest::Approx(a.coefficients[1]).epsilon(1e-9));
    CHECK(b.coefficients[0] == doctest::Approx(a.coefficients[0] - 1e3 * a.coefficients[1]).epsilon(1e-9));
  }

  TEST_CASE("degenerate fits are rejected") {
    const std::vector<double> t = {1.0, 1.0, 1.0}, g = {0.0, 1.0, 2.0};
    CHECK_THROWS_AS(drift_fit(t, g, FitModel::linear), ContractError);
    const std::vector<double> two = {0.0, 1.0};
    CHECK_THROWS_AS(drift_fit(two, two, FitModel::linear), ContractError);
  }

  TEST_CASE("energy series") {
    const BouncingBall ball;
    auto es = energy_series(ball, ball_record(ball, {0.2, 0.2, 0.2, 0.2}, 1e-3));
    CHECK(es.energies.size() == 4);
    CHECK(es.max_increase == 0.0);
    es = energy_series(ball, ball_record(ball, {0.2, 0.1, 0.3, 0.25}, 1e-3));
    CHECK(es.max_increase == doctest::Approx(9.81 * 0.2));
    CHECK(es.max_increase_step == 2);
  }

  TEST_CASE("ball energy decreases across impacts") {
    const BouncingBall ball;
    SolverConfig cfg;
    cfg.dt = 1e-4;
    for (auto scheme : {Scheme::moreau, Scheme::ggl_unified}) {
      const auto rec = simulate(ball, scheme, cfg, ball.initial_state(), 1.0);
      const auto es = energy_series(ball, rec);
      CHECK(es.max_increase <= 1e-6 * es.energies.front());
      CHECK(es.energies.back() < es.energies.front());
    }
  }

  TEST_CASE("contact windows and drift") {
    const BouncingBall ball;
    std::vector<double> h = {0.1, 0.05};
    for (int k = 0; k < 10; ++k) h.push_back(-1e-5 * k);
    h.push_back(0.02);
    const auto rec = ball_record(ball, h, 1e-3);
    const auto windows = contact_windows(rec);
    REQUIRE(windows.size() == 3);
    CHECK(windows[1].begin == 2);
    CHECK(windows[1].end == 12);
    const auto drifts = single_contact_drifts(rec, 5);
    REQUIRE(drifts.size() == 1);
    CHECK(drifts[0].contact == 0);
    CHECK(drifts[0].slope() == doctest::Approx(-1e-2).epsilon(1e-9));
  }

  TEST_CASE("Moreau drift-off on the slider-crank") {
    const UnilateralSliderCrank slider;
    SolverConfig cfg;
    const auto rec = simulate(slider, Scheme::moreau, cfg, slider_crank_initial_state(true), 0.2);
    CHECK(penetration_stats(rec).min_gap < -1e-5);
    bool significant = false;
    for (const auto& d : single_contact_drifts(rec, 50)) {
      significant = significant || (d.slope() < 0.0 && -d.slope() > 10 * d.slope_error());
    }
    CHECK(significant);
  }
}
