#ifndef PADAPT_ENVIRONMENT_HPP_
#define PADAPT_ENVIRONMENT_HPP_

#include <functional>
#include <span>
#include <string>

#include "padapt/rng.hpp"

namespace padapt {

inline constexpr int kMinOrder = 2;
inline constexpr int kMaxOrder = 10;

/// State seen by the agent: current order and log-mapped error in [0, 10].
struct AgentObservation {
  int p = kMinOrder;
  double e = 0.0;
};

enum class Action : int { Decrease = 0, Keep = 1, Increase = 2 };

inline constexpr int kNumActions = 3;

inline int order_change(Action a) { return static_cast<int>(a) - 1; }
std::string to_string(Action a);

/// Applies an action, leaving p unchanged when the move would leave [p_min, p_max].
int apply_action(int p, Action a, int p_min = kMinOrder, int p_max = kMaxOrder);

struct RewardConfig {
  double sigma = 0.01;
  int p_max = kMaxOrder;
  int n_reward_points = 2 * kMaxOrder + 1;
  int n_state_points = 3;

  void validate() const;
};

/// g(xi) = (1 + a sin(2 pi f (xi - c))) / 2 on the reference element.
struct RandomFunction {
  double a = 1.0;
  double c = 0.0;
  double f = 0.0;
};

struct EpisodeConfig {
  int steps_per_episode = 20;
  int num_episodes = 25000;
};

using TargetFunction = std::function<double(double)>;

double eval_random_function(const RandomFunction& rf, double xi);
TargetFunction as_target(const RandomFunction& rf);

/// Error indicator from the gap between the degree-p interpolant of `values`
/// (samples at the degree-p Gauss nodes) and its degree-(p-1) re-interpolation,
/// measured at xi = -1, 0, +1 and mapped to e = -log10(min(mse + 1e-10, 1)).
double compute_state_error(std::span<const double> values, int p);

/// Mean squared gap at the three state points, before the log map.
double state_mse(std::span<const double> values, int p);

/// Cost-accuracy reward for a given rmse at order p.
double reward_from_rmse(double rmse, int p, const RewardConfig& cfg = {});

/// rmse between g and its degree-(p-1) interpolant on the reward points.
double reward_rmse(const TargetFunction& g, int p, const RewardConfig& cfg = {});

double compute_reward(const TargetFunction& g, int p, const RewardConfig& cfg = {});

struct OptimalOrder {
  int p = kMinOrder;
  double reward = 0.0;
};

/// Brute-force argmax of the reward over [p_min, p_max]; ties go to the lowest p.
OptimalOrder optimal_p(const TargetFunction& g, const RewardConfig& cfg = {});

/// State of g sampled at the degree-p Gauss nodes.
AgentObservation observe_target(const TargetFunction& g, int p);

struct EpisodeStart {
  RandomFunction g;
  int p0 = kMinOrder;
  AgentObservation obs0;
};

EpisodeStart episode_reset(Rng& rng);

struct StepResult {
  int p = kMinOrder;
  AgentObservation obs;
  double reward = 0.0;
};

StepResult episode_step(const TargetFunction& g, int p, Action action, const RewardConfig& cfg = {});

}  // namespace padapt

#endif  // PADAPT_ENVIRONMENT_HPP_
