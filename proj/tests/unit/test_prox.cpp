#include <random>

#include "doctest.h"
#include "ggl/explicit_steppers.hpp"
#include "ggl/prox.hpp"

using namespace ggl;

namespace {
Vector v1(double x) { return Vector::Constant(1, x); }
}  // namespace

TEST_SUITE("prox") {
  TEST_CASE("projection onto the nonnegative half-line") {
    CHECK(prox_nonneg(-3.2) == 0.0);
    CHECK(prox_nonneg(0.0) == 0.0);
    CHECK(prox_nonneg(7.5) == 7.5);
    CHECK(prox_passes(0.0));
    CHECK_FALSE(prox_passes(-1e-300));
  }

  TEST_CASE("impact residual examples") {
    const auto r = ProxParams::uniform(1);
    CHECK(impact_residual(v1(0), v1(1), v1(0), v1(0.5), r)[0] == 0.0);
    CHECK(impact_residual(v1(2), v1(0), v1(0), v1(0.5), r)[0] == 0.0);
    CHECK(impact_residual(v1(1), v1(-0.5), v1(-1), v1(0.5), r)[0] == -1.0);
  }

  TEST_CASE("position residual examples") {
    const auto r = ProxParams::uniform(1);
    CHECK(position_residual(v1(0), v1(1e-3), r)[0] == 0.0);
    CHECK(position_residual(v1(0.2), v1(0), r)[0] == 0.0);
    CHECK(position_residual(v1(0), v1(-1e-3), r)[0] == -1e-3);
  }

  TEST_CASE("weights must be positive and dimensions agree") {
    CHECK_THROWS_AS(ProxParams(v1(0.0)), ContractError);
    CHECK_THROWS_AS(ProxParams(v1(-1.0)), ContractError);
    const auto r = ProxParams::uniform(2);
    CHECK_THROWS_AS(impact_residual(v1(0), v1(0), v1(0), v1(0), r), ContractError);
    CHECK_THROWS_AS(position_residual(Vector::Zero(2), v1(0), r), ContractError);
  }

  TEST_CASE("prox is 1-Lipschitz and idempotent") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> dist(-1e3, 1e3);
    for (int k = 0; k < 10000; ++k) {
      const double x = dist(rng), y = dist(rng);
      CHECK(std::abs(prox_nonneg(x) - prox_nonneg(y)) <= std::abs(x - y));
      CHECK(prox_nonneg(prox_nonneg(x)) == prox_nonneg(x));
    }
  }

  TEST_CASE("roots do not depend on the weights") {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    int roots = 0, non_roots = 0;
    for (int k = 0; k < 2000; ++k) {
      // complementary pairs are roots; everything else is not
      const bool root = k % 2 == 0;
      double lambda = std::abs(dist(rng));
      double s = std::abs(dist(rng));
      if (root) {
        (k % 4 == 0 ? lambda : s) = 0.0;
      } else if (k % 3 == 0) {
        s = -s;
      }
      const double eps = 0.5 * (dist(rng) + 1.0);
      const double gd_now = dist(rng);
      const double gd_next = s - eps * gd_now;
      for (double rv : {1e-2, 1.0, 1e2}) {
        const double res =
            impact_residual(v1(lambda), v1(gd_next), v1(gd_now), v1(eps), ProxParams::uniform(1, rv))[0];
        const double pres = position_residual(v1(lambda), v1(s), ProxParams::uniform(1, rv))[0];
        if (root) {
          CHECK(std::abs(res) <= 1e-12);
          CHECK(std::abs(pres) <= 1e-12);
        } else if (lambda * std::abs(s) > 1e-6 || s < -1e-6) {
          CHECK(res != 0.0);
          CHECK(pres != 0.0);
        }
      }
      root ? ++roots : ++non_roots;
    }
    CHECK(roots > 0);
    CHECK(non_roots > 0);
  }

  TEST_CASE("numerical roots are complementary") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int k = 0; k < 200; ++k) {
      const int n = 1 + k % 4;
      Matrix A(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = dist(rng);
      const Matrix G = A * A.transpose() + 0.1 * Matrix::Identity(n, n);
      Vector c(n);
      for (int i = 0; i < n; ++i) c[i] = dist(rng);
      const Vector r = G.diagonal().cwiseInverse();
      const auto sol = solve_impulse_problem(G, c, r, 1e-13, 100);
      REQUIRE(sol.converged);
      const Vector s = G * sol.lambda + c;
      for (int i = 0; i < n; ++i) {
        CHECK(sol.lambda[i] >= 0.0);
        CHECK(s[i] >= -1e-12);
        CHECK(std::abs(sol.lambda[i] * s[i]) <= 1e-12);
      }
    }
  }
}
