#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>

#include "padapt/environment.hpp"
#include "padapt/quadrature.hpp"
#include "padapt/rng.hpp"

using namespace padapt;

namespace {

std::vector<double> sample(const std::function<double(double)>& f, int p) {
  std::vector<double> v;
  for (double x : gauss_legendre(p).nodes) v.push_back(f(x));
  return v;
}

}  // namespace

TEST_CASE("apply_action: moves and clamps at the order bounds") {
  CHECK(apply_action(5, Action::Increase) == 6);
  CHECK(apply_action(5, Action::Decrease) == 4);
  CHECK(apply_action(5, Action::Keep) == 5);
  CHECK(apply_action(2, Action::Decrease) == 2);
  CHECK(apply_action(10, Action::Increase) == 10);
  CHECK(apply_action(2, Action::Increase) == 3);
  CHECK(apply_action(10, Action::Decrease) == 9);
  CHECK(order_change(Action::Decrease) == -1);
  CHECK(to_string(Action::Increase) == "increase");
}

TEST_CASE("reward_from_rmse: cost factor fixed points") {
  CHECK(std::abs(reward_from_rmse(0.0, 10) - 1.0) <= 1e-12);
  CHECK(std::abs(reward_from_rmse(0.0, 2) - 20.2) <= 1e-12);
  CHECK(std::abs(reward_from_rmse(0.0, 5) - 101.0 / 26.0) <= 1e-12);
  // One sigma of error costs a factor exp(-1/2).
  CHECK(std::abs(reward_from_rmse(0.01, 10) - std::exp(-0.5)) <= 1e-12);
}

TEST_CASE("reward_from_rmse: sigma ordering at p = 5, rmse = 0.01") {
  RewardConfig wide, mid, narrow;
  wide.sigma = 0.1;
  narrow.sigma = 0.001;
  const double rw = reward_from_rmse(0.01, 5, wide);
  const double rm = reward_from_rmse(0.01, 5, mid);
  const double rn = reward_from_rmse(0.01, 5, narrow);
  CHECK(rw > rm);
  CHECK(rm > rn);
  CHECK(std::abs(rm - 101.0 / 26.0 * std::exp(-0.5)) <= 1e-12);
}

TEST_CASE("RewardConfig: validation") {
  RewardConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.sigma = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = RewardConfig{};
  cfg.n_reward_points = 10;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = RewardConfig{};
  cfg.n_state_points = 4;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("compute_state_error: clamps at 10 and 0") {
  // Polynomials of degree < p are reproduced by the degree-(p-1) re-interpolation.
  for (int p = 2; p <= 10; ++p) {
    CAPTURE(p);
    const auto v = sample([p](double x) { return 0.3 + std::pow(x, p - 1) - 0.5 * x; }, p);
    CHECK(std::abs(compute_state_error(v, p) - 10.0) <= 1e-12);
  }
  const auto constant = sample([](double) { return 0.7; }, 4);
  CHECK(compute_state_error(constant, 4) == 10.0);

  // A huge top-degree component drives the mse far above one.
  const auto wild = sample([](double x) { return 1e3 * std::pow(x, 5); }, 5);
  CHECK(state_mse(wild, 5) >= 1.0);
  CHECK(compute_state_error(wild, 5) == 0.0);
}

TEST_CASE("compute_state_error: rejects p < 2") {
  const std::vector<double> v = {1.0, 2.0};
  CHECK_THROWS_AS(compute_state_error(v, 1), std::invalid_argument);
}

TEST_CASE("compute_state_error: matches frozen NumPy values") {
  auto f = [](double x) { return std::sin(2.0 * M_PI * x + 0.3); };
  CHECK(std::abs(state_mse(sample(f, 4), 4) - 0.5013384371856462) <= 1e-12);
  CHECK(std::abs(compute_state_error(sample(f, 4), 4) - 0.2998689970404179) <= 1e-12);
  CHECK(std::abs(state_mse(sample(f, 6), 6) - 0.1865872631611837) <= 1e-12);
  CHECK(std::abs(compute_state_error(sample(f, 6), 6) - 0.7291180051992473) <= 1e-12);
  // Odd symmetry makes the degree-3 re-interpolation exact at -1, 0, 1.
  const auto odd = sample([](double x) { return std::sin(2.0 * M_PI * x); }, 4);
  CHECK(compute_state_error(odd, 4) == doctest::Approx(10.0));
}

TEST_CASE("compute_reward: matches frozen NumPy values") {
  const RandomFunction g1{1.0, 0.0, 1.0};
  const auto best = optimal_p(as_target(g1));
  CHECK(best.p == 10);
  CHECK(std::abs(best.reward - 0.901407441218956) <= 1e-10);
  CHECK(std::abs(compute_reward(as_target(g1), 8) - 0.000182891229619729) <= 1e-12);
  CHECK(std::abs(compute_reward(as_target(g1), 9) - 0.08643418207621617) <= 1e-12);

  const RandomFunction g2{-1.0, 0.3, 0.4};
  const auto best2 = optimal_p(as_target(g2));
  CHECK(best2.p == 6);
  CHECK(std::abs(best2.reward - 2.6400308797240593) <= 1e-10);
}

TEST_CASE("compute_reward: constant target gives the pure cost factor") {
  const RandomFunction flat{1.0, 0.0, 0.0};
  for (int p = 2; p <= 10; ++p) CHECK(std::abs(compute_reward(as_target(flat), p) - 101.0 / (p * p + 1)) <= 1e-12);
  CHECK(optimal_p(as_target(flat)).p == 2);
  CHECK_THROWS_AS(compute_reward(as_target(flat), 1), std::invalid_argument);
  CHECK_THROWS_AS(compute_reward(as_target(flat), 11), std::invalid_argument);
}

TEST_CASE("eval_random_function: definition") {
  const RandomFunction g{-1.0, 0.25, 0.5};
  for (double xi : {-1.0, -0.2, 0.0, 0.6, 1.0}) {
    CHECK(eval_random_function(g, xi) == doctest::Approx(0.5 * (1.0 - std::sin(M_PI * (xi - 0.25)))));
    CHECK(eval_random_function(g, xi) >= 0.0);
    CHECK(eval_random_function(g, xi) <= 1.0);
  }
}

TEST_CASE("episode_reset: parameter ranges and determinism") {
  Rng a(99), b(99);
  std::set<int> orders;
  for (int i = 0; i < 2000; ++i) {
    const auto s = episode_reset(a);
    const auto t = episode_reset(b);
    CHECK(s.g.a == t.g.a);
    CHECK(s.g.c == t.g.c);
    CHECK(s.p0 == t.p0);
    CHECK((s.g.a == 1.0 || s.g.a == -1.0));
    CHECK(s.g.c >= -1.0);
    CHECK(s.g.c < 1.0);
    CHECK(s.g.f >= 0.0);
    CHECK(s.g.f < 1.0);
    CHECK(s.obs0.p == s.p0);
    CHECK(s.obs0.e >= 0.0);
    CHECK(s.obs0.e <= 10.0);
    orders.insert(s.p0);
  }
  CHECK(orders.size() == 9);
  CHECK(*orders.begin() == 2);
  CHECK(*orders.rbegin() == 10);
}

TEST_CASE("episode_step: applies the action and scores the new order") {
  const RandomFunction g{1.0, 0.1, 0.7};
  const auto t = as_target(g);
  const auto r = episode_step(t, 4, Action::Increase);
  CHECK(r.p == 5);
  CHECK(r.obs.p == 5);
  CHECK(r.reward == compute_reward(t, 5));
  CHECK(r.obs.e == observe_target(t, 5).e);
  CHECK(episode_step(t, 10, Action::Increase).p == 10);
  CHECK(episode_step(t, 2, Action::Decrease).p == 2);
  CHECK_THROWS_AS(episode_step(t, 11, Action::Keep), std::invalid_argument);
}
