#include "padapt/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "padapt/quadrature.hpp"

namespace padapt {

namespace {

constexpr double kStatePoints[] = {-1.0, 0.0, 1.0};

std::vector<double> sample(const TargetFunction& g, std::span<const double> nodes) {
  std::vector<double> out;
  out.reserve(nodes.size());
  for (double xi : nodes) out.push_back(g(xi));
  return out;
}

}  // namespace

std::string to_string(Action a) {
  switch (a) {
    case Action::Decrease: return "decrease";
    case Action::Keep: return "keep";
    case Action::Increase: return "increase";
  }
  return "unknown";
}

int apply_action(int p, Action a, int p_min, int p_max) {
  const int next = p + order_change(a);
  return (next < p_min || next > p_max) ? p : next;
}

void RewardConfig::validate() const {
  if (!(sigma > 0.0)) throw std::invalid_argument("RewardConfig: sigma must be > 0");
  if (p_max < kMinOrder || p_max > kMaxCachedDegree) {
    throw std::invalid_argument("RewardConfig: p_max out of range");
  }
  if (n_reward_points < p_max + 1) {
    throw std::invalid_argument("RewardConfig: n_reward_points must be >= p_max + 1");
  }
  if (n_state_points != 3) throw std::invalid_argument("RewardConfig: n_state_points must be 3");
}

double eval_random_function(const RandomFunction& rf, double xi) {
  return 0.5 * (1.0 + rf.a * std::sin(2.0 * std::numbers::pi * rf.f * (xi - rf.c)));
}

TargetFunction as_target(const RandomFunction& rf) {
  return [rf](double xi) { return eval_random_function(rf, xi); };
}

double state_mse(std::span<const double> values, int p) {
  if (p < 2) throw std::invalid_argument("compute_state_error: p must be >= 2");
  if (p > kMaxCachedDegree) throw std::invalid_argument("compute_state_error: p too large");
  const auto& high = reference_element(p).basis;
  const auto& low = reference_element(p - 1);
  // The lower-order reconstruction comes from the degree-p interpolant,
  // not from the underlying function.
  const auto low_values = interpolate_to(high, values, low.rule.nodes);
  double sum = 0.0;
  for (double xi : kStatePoints) {
    const double d = lagrange_eval(high, values, xi) - lagrange_eval(low.basis, low_values, xi);
    sum += d * d;
  }
  return sum / 3.0;
}

double compute_state_error(std::span<const double> values, int p) {
  const double mse = state_mse(values, p);
  return -std::log10(std::min(mse + 1e-10, 1.0));
}

double reward_from_rmse(double rmse, int p, const RewardConfig& cfg) {
  const double cost = (cfg.p_max * cfg.p_max + 1.0) / (p * p + 1.0);
  return cost * std::exp(-(rmse * rmse) / (2.0 * cfg.sigma * cfg.sigma));
}

double reward_rmse(const TargetFunction& g, int p, const RewardConfig& cfg) {
  cfg.validate();
  if (p < kMinOrder || p > cfg.p_max) {
    throw std::invalid_argument("compute_reward: p = " + std::to_string(p) + " outside [2, p_max]");
  }
  // Approximation of g from its own samples at the degree-(p-1) nodes.
  const auto& low = reference_element(p - 1);
  const auto low_values = sample(g, low.rule.nodes);
  const int reward_degree = cfg.n_reward_points - 1;
  const QuadratureRule reward_rule = reward_degree <= kMaxCachedDegree
                                         ? reference_element(reward_degree).rule
                                         : gauss_legendre(reward_degree);
  double sum = 0.0;
  for (double xi : reward_rule.nodes) {
    const double d = g(xi) - lagrange_eval(low.basis, low_values, xi);
    sum += d * d;
  }
  return std::sqrt(sum / cfg.n_reward_points);
}

double compute_reward(const TargetFunction& g, int p, const RewardConfig& cfg) {
  return reward_from_rmse(reward_rmse(g, p, cfg), p, cfg);
}

OptimalOrder optimal_p(const TargetFunction& g, const RewardConfig& cfg) {
  OptimalOrder best{kMinOrder, compute_reward(g, kMinOrder, cfg)};
  for (int p = kMinOrder + 1; p <= cfg.p_max; ++p) {
    const double r = compute_reward(g, p, cfg);
    if (r > best.reward) best = {p, r};
  }
  return best;
}

AgentObservation observe_target(const TargetFunction& g, int p) {
  const auto values = sample(g, reference_element(p).rule.nodes);
  return {p, compute_state_error(values, p)};
}

EpisodeStart episode_reset(Rng& rng) {
  EpisodeStart start;
  start.g.a = rng.uniform() < 0.5 ? -1.0 : 1.0;
  start.g.c = rng.uniform(-1.0, 1.0);
  start.g.f = rng.uniform();
  start.p0 = rng.uniform_int(kMinOrder, kMaxOrder);
  start.obs0 = observe_target(as_target(start.g), start.p0);
  return start;
}

StepResult episode_step(const TargetFunction& g, int p, Action action, const RewardConfig& cfg) {
  if (p < kMinOrder || p > cfg.p_max) {
    throw std::invalid_argument("episode_step: p = " + std::to_string(p) + " outside [2, p_max]");
  }
  StepResult out;
  out.p = apply_action(p, action, kMinOrder, cfg.p_max);
  out.obs = observe_target(g, out.p);
  out.reward = compute_reward(g, out.p, cfg);
  return out;
}

}  // namespace padapt
