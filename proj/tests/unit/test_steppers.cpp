#include <cmath>

#include "doctest.h"
#include "ggl/explicit_steppers.hpp"
#include "ggl/models.hpp"
#include "ggl/simulation.hpp"

using namespace ggl;

namespace {

GeneralizedState ball_state(double q, double v) { return {0.0, Vector::Constant(1, q), Vector::Constant(1, v)}; }

SolverConfig with_dt(double dt) {
  SolverConfig cfg;
  cfg.dt = dt;
  return cfg;
}

}  // namespace

TEST_SUITE("steppers-explicit") {
  TEST_CASE("active set prediction") {
    const BouncingBall ball;
    CHECK(predict_active_set(ball, ball_state(1.0, 0.0), 1e-3, 0.0).empty());
    CHECK(predict_active_set(ball, ball_state(1e-6, -1.0), 1e-3, 0.0) == ActiveSet{0});
    const UnilateralSliderCrank slider;
    CHECK(predict_active_set(slider, slider_crank_initial_state(true), 1e-5, 0.0).empty());
    CHECK(predict_active_set(ball, ball_state(1e-6, 0.0), 1e-3, 2e-6) == ActiveSet{0});
  }

  TEST_CASE("solver configuration is validated") {
    SolverConfig cfg;
    cfg.dt = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ContractError);
    cfg = SolverConfig{};
    cfg.max_iter = 0;
    CHECK_THROWS_AS(cfg.validate(), ContractError);
    cfg = SolverConfig{};
    cfg.newton_tol = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ContractError);
  }

  TEST_CASE("ball in free flight") {
    const BouncingBall ball;
    const auto out = moreau_step(ball, ball_state(0.5, 0.3), with_dt(1e-3));
    const double v1 = 0.3 - 9.81e-3;
    CHECK(out.state.v[0] == doctest::Approx(v1).epsilon(1e-15));
    CHECK(out.state.q[0] == doctest::Approx(0.5 + (v1 + 0.3) * 0.5e-3).epsilon(1e-15));
    CHECK(out.state.t == 1e-3);
    CHECK(out.active.empty());
    CHECK(out.lambda[0] == 0.0);
    CHECK(out.converged);
  }

  TEST_CASE("ball impact follows Newton's law") {
    const BouncingBall ball;
    const auto out = moreau_step(ball, ball_state(1e-6, -1.0), with_dt(1e-3));
    REQUIRE(out.active == ActiveSet{0});
    CHECK(out.state.v[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(out.lambda[0] == doctest::Approx(1.5 + 9.81e-3).epsilon(1e-9));
  }

  TEST_CASE("slider-crank step matches the reference implementation") {
    const UnilateralSliderCrank slider;
    const auto out = moreau_step(slider, slider_crank_initial_state(true), with_dt(1e-5));
    const double v[3] = {149.99791362731497, -74.999121249238371, 0.0};
    const double q[3] = {0.0014999895681365751, -0.00074999560624619196, 0.0};
    for (int i = 0; i < 2; ++i) {
      CHECK(out.state.v[i] == doctest::Approx(v[i]).epsilon(1e-12));
      CHECK(out.state.q[i] == doctest::Approx(q[i]).epsilon(1e-12));
    }
    CHECK(std::abs(out.state.v[2]) <= 1e-12);
    CHECK(std::abs(out.state.q[2]) <= 1e-12);
  }

  TEST_CASE("decoupled projection of the ball forecast") {
    const BouncingBall ball;
    // forecast q + (v0 + v1) dt/2 with v1 = 0.5 after the impact
    auto out = decoupled_ggl_step(ball, ball_state(1.5e-4, -1.0), with_dt(1e-3));
    REQUIRE(out.active == ActiveSet{0});
    CHECK(std::abs(out.state.q[0]) <= 1e-12);
    CHECK(out.psi[0] == doctest::Approx(1e-4).epsilon(1e-9));
    CHECK(out.state.v[0] == doctest::Approx(0.5).epsilon(1e-9));

    out = decoupled_ggl_step(ball, ball_state(3.5e-4, -1.0), with_dt(1e-3));
    REQUIRE(out.active == ActiveSet{0});
    CHECK(out.state.q[0] == doctest::Approx(1e-4).epsilon(1e-9));
    CHECK(out.psi[0] == 0.0);
  }

  TEST_CASE("decoupled step without contacts equals Moreau's step") {
    const UnilateralSliderCrank slider;
    const auto s = slider_crank_initial_state(true);
    const auto a = moreau_step(slider, s, with_dt(1e-5));
    const auto b = decoupled_ggl_step(slider, s, with_dt(1e-5));
    CHECK(a.state.q == b.state.q);
    CHECK(a.state.v == b.state.v);
    CHECK(b.psi.cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("contact-free energy drift") {
    SliderCrankParams wide;
    wide.clearance = 1.0;
    const UnilateralSliderCrank slider(wide);
    auto worst_drift = [&](double dt) {
      const auto rec = simulate(slider, Scheme::moreau, with_dt(dt), slider_crank_initial_state(true), 0.1);
      double worst = 0.0;
      for (std::size_t k = 0; k < rec.size(); ++k) {
        CHECK(rec.active_sets[k].empty());
        worst = std::max(worst, std::abs(rec.energies[k] - rec.energies.front()));
      }
      return worst / rec.energies.front();
    };
    const double coarse = worst_drift(1e-5);  // 10^4 steps
    CHECK(coarse <= 1e-2);
    // h is evaluated with v_n, so the drift is first order in dt
    const double fine = worst_drift(1e-6);
    CHECK(fine <= coarse / 5.0);
  }

  TEST_CASE("impact law and non-penetration at convergence") {
    const UnilateralSliderCrank slider;
    const SolverConfig cfg = with_dt(1e-5);
    GeneralizedState moreau_state = slider_crank_initial_state(true);
    GeneralizedState decoupled_state = moreau_state;
    int active_steps = 0;
    for (int n = 0; n < 20000; ++n) {
      const auto out = moreau_step(slider, moreau_state, cfg);
      REQUIRE(out.converged);
      const Vector q_mid = moreau_state.q + 0.5 * cfg.dt * moreau_state.v;
      const Matrix w = slider.gap_jacobian(q_mid);
      const Vector s = w * out.state.v + slider.restitution().cwiseProduct(w * moreau_state.v);
      for (int i : out.active) {
        CHECK(out.lambda[i] >= 0.0);
        CHECK(s[i] >= -cfg.newton_tol);
        CHECK(out.lambda[i] * s[i] <= cfg.newton_tol * std::max(1.0, out.lambda[i]));
      }
      active_steps += out.active.empty() ? 0 : 1;
      moreau_state = out.state;

      const auto dec = decoupled_ggl_step(slider, decoupled_state, cfg);
      REQUIRE(dec.converged);
      const Vector g = slider.gaps(dec.state.q);
      for (int i : dec.active) {
        CHECK(g[i] >= -cfg.newton_tol);
        CHECK(dec.psi[i] >= 0.0);
      }
      decoupled_state = dec.state;
    }
    CHECK(active_steps > 0);
  }
}
