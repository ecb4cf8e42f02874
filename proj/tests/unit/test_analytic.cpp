#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "padapt/analytic.hpp"

using namespace padapt;

TEST_CASE("exact_u: initial condition at t = 0") {
  const CharacteristicSolver s;
  CHECK(std::abs(s.exact_u(0.25, 0.0) - 3.0) < 1e-15);
  CHECK(std::abs(s.exact_u(0.5, 0.0) - 2.0) < 1e-15);
}

TEST_CASE("exact_u: agrees with a bisection oracle") {
  const CharacteristicSolver s;
  auto g = [](double x, double t) {
    return [x, t](double u) { return u - 2.0 - std::sin(2.0 * M_PI * (x - u * t)); };
  };
  CHECK(std::abs(s.exact_u(0.3, 0.1) - oracle::bisection(g(0.3, 0.1), 1.0, 3.0)) <= 1e-10);

  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> ux(-0.5, 1.5), ut(0.0, 0.12);
  for (int i = 0; i < 500; ++i) {
    const double x = ux(gen), t = ut(gen);
    CAPTURE(x);
    CAPTURE(t);
    const double u = s.exact_u(x, t);
    CHECK(CharacteristicSolver::residual(u, x, t) <= 1e-12);
    CHECK(std::abs(u - oracle::bisection(g(x, t), 1.0, 3.0)) <= 1e-10);
  }
}

TEST_CASE("exact_u: continuous t -> 0 limit") {
  const CharacteristicSolver s;
  for (double x = 0.0; x < 1.0; x += 0.05) CHECK(std::abs(s.exact_u(x, 1e-8) - initial_condition(x)) < 1e-6);
}

TEST_CASE("exact_u: rejects times at or beyond the shock") {
  const CharacteristicSolver s;
  CHECK_THROWS_AS(s.exact_u(0.3, kShockTime), AnalyticError);
  CHECK_THROWS_AS(s.exact_u(0.3, -0.01), AnalyticError);
  try {
    s.exact_u(0.3, 0.2);
  } catch (const AnalyticError& e) {
    CHECK(e.kind() == AnalyticError::Kind::AfterShock);
  }
}

TEST_CASE("exact_u: reports non-convergence") {
  // One Newton iteration and a tolerance below round-off cannot be met.
  const CharacteristicSolver s(1e-300, 1);
  try {
    s.exact_u(0.9, 0.12);
    FAIL("expected AnalyticError");
  } catch (const AnalyticError& e) {
    CHECK(e.kind() == AnalyticError::Kind::NotConverged);
  }
  CHECK_THROWS_AS(CharacteristicSolver(0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(CharacteristicSolver(1e-12, 0), std::invalid_argument);
}

TEST_CASE("exact_profile: vectorized, periodic, mass-conserving") {
  const CharacteristicSolver s;
  std::vector<double> x;
  for (int i = 0; i < 2001; ++i) x.push_back(i / 2000.0);
  const auto u0 = s.exact_profile(x, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(u0[i] == doctest::Approx(initial_condition(x[i])).epsilon(1e-15));

  const auto u = s.exact_profile(x, 0.12);
  double mean = 0.0;
  for (double v : u) mean += v;
  mean /= static_cast<double>(u.size());
  CHECK(std::abs(mean - 2.0) < 2e-3);

  for (double xi : {0.0, 0.13, 0.5, 0.77}) CHECK(std::abs(s.exact_u(xi, 0.12) - s.exact_u(xi + 1.0, 0.12)) < 1e-12);
}

TEST_CASE("exact_profile: error carries the offending index") {
  const CharacteristicSolver s(1e-300, 1);
  const std::vector<double> x = {0.5, 0.9};
  try {
    s.exact_profile(x, 0.12);
    FAIL("expected AnalyticError");
  } catch (const AnalyticError& e) {
    CHECK(e.index() >= 0);
  }
}
