#ifndef PADAPT_PPO_HPP_
#define PADAPT_PPO_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "padapt/environment.hpp"
#include "padapt/rng.hpp"

namespace padapt {

/// Fully connected network with tanh hidden layers and a linear output.
/// Parameters live in one flat vector, layer by layer: W (out x in, row-major), then b.
class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(std::vector<int> sizes);

  const std::vector<int>& sizes() const { return sizes_; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  std::size_t num_layers() const { return sizes_.size() - 1; }

  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  /// Offsets of W and b of layer l inside params().
  std::size_t weight_offset(std::size_t l) const { return offsets_[l]; }
  std::size_t bias_offset(std::size_t l) const {
    return offsets_[l] + static_cast<std::size_t>(sizes_[l + 1]) * sizes_[l];
  }

  /// Xavier-uniform weights (output layer scaled by output_scale), zero biases.
  void initialize(Rng& rng, double output_scale);

  /// Activations of every layer; [0] is the input, back() is the output.
  using Activations = std::vector<std::vector<double>>;

  std::vector<double> forward(std::span<const double> x, Activations* acts = nullptr) const;

  /// Accumulates d(loss)/d(params) into grad given d(loss)/d(output).
  void backward(const Activations& acts, std::span<const double> grad_out,
                std::span<double> grad) const;

 private:
  std::vector<int> sizes_;
  std::vector<std::size_t> offsets_;
  std::vector<double> params_;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
};

inline constexpr int kInputSize = 2;
inline constexpr int kHiddenSize = 64;

struct Architecture {
  std::vector<int> actor;
  std::vector<int> critic;

  static Architecture standard(int hidden = kHiddenSize) {
    return {{kInputSize, hidden, hidden, kNumActions}, {kInputSize, hidden, hidden, 1}};
  }
  friend bool operator==(const Architecture&, const Architecture&) = default;
};

struct PolicyParameters {
  Mlp actor;
  Mlp critic;
  AdamState actor_adam;
  AdamState critic_adam;
  std::uint64_t step_count = 0;

  Architecture architecture() const { return {actor.sizes(), critic.sizes()}; }

  /// Fresh parameters; zero Adam moments.
  static PolicyParameters create(Rng& rng, const Architecture& arch = Architecture::standard());
  /// All weights and biases set to zero.
  static PolicyParameters zeros(const Architecture& arch = Architecture::standard());
};

struct AgentConfig {
  double learning_rate = 1e-3;
  double exploration = 1e-2;
  double discount = 0.99;
  double clip_ratio = 0.1;
  double gae_lambda = 0.95;
  int epochs_per_update = 10;
  double entropy_coefficient = 0.01;
  double value_loss_coefficient = 0.5;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  /// Global gradient-norm clip per network; <= 0 disables it.
  double max_grad_norm = 0.0;

  void validate() const;
};

struct Transition {
  AgentObservation obs;
  Action action = Action::Keep;
  double log_prob = 0.0;
  double reward = 0.0;
  double value = 0.0;
};

struct Trajectory {
  std::vector<Transition> steps;
  bool terminal = true;
};

struct PolicyOutput {
  std::array<double, kNumActions> logits{};
  double value = 0.0;
};

PolicyOutput policy_forward(const PolicyParameters& params, const AgentObservation& obs);

/// Actor head only; what inference on a frozen agent needs.
std::array<double, kNumActions> actor_logits(const PolicyParameters& params, const AgentObservation& obs);

std::array<double, kNumActions> softmax(const std::array<double, kNumActions>& logits);
std::array<double, kNumActions> log_softmax(const std::array<double, kNumActions>& logits);

enum class ActionMode { Stochastic, Greedy };

struct ActionChoice {
  Action action = Action::Keep;
  double log_prob = 0.0;
};

/// Stochastic: uniform action with probability epsilon, otherwise a softmax
/// sample. log_prob is always the pure-softmax log-probability of the chosen
/// action. Greedy: argmax of the logits, ties to the lowest index.
ActionChoice select_action(const PolicyParameters& params, const AgentObservation& obs,
                           ActionMode mode, Rng& rng, double epsilon);

Action greedy_action(const std::array<double, kNumActions>& logits);

struct Advantages {
  std::vector<double> advantages;
  std::vector<double> returns;
};

/// GAE with V_N = 0 after the last step. Returns are A_t + V_t computed
/// before the advantages are normalized.
Advantages compute_advantages(const Trajectory& traj, double gamma, double lambda,
                              bool normalize = true);

/// Everything the loss needs for one batch, with advantages already computed.
struct UpdateBatch {
  std::vector<AgentObservation> obs;
  std::vector<Action> actions;
  std::vector<double> old_log_probs;
  std::vector<double> advantages;
  std::vector<double> returns;
};

UpdateBatch make_batch(const Trajectory& traj, const AgentConfig& cfg);

struct LossBreakdown {
  double actor_loss = 0.0;    // clipped surrogate and entropy bonus
  double critic_loss = 0.0;   // value coefficient times mean squared error
  double entropy = 0.0;       // mean policy entropy
  double surrogate = 0.0;     // mean clipped surrogate (without sign)
  double total() const { return actor_loss + critic_loss; }
};

struct Gradients {
  std::vector<double> actor;
  std::vector<double> critic;
};

/// Loss of the batch under params and, when grads is non-null, its exact gradient.
LossBreakdown ppo_loss(const PolicyParameters& params, const UpdateBatch& batch,
                       const AgentConfig& cfg, Gradients* grads);

/// One Adam step per network with bias correction; increments step_count.
void adam_step(PolicyParameters& params, const Gradients& grads, const AgentConfig& cfg);

struct UpdateStats {
  LossBreakdown first_epoch;
  LossBreakdown last_epoch;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// epochs_per_update full-batch passes of the clipped PPO objective.
UpdateStats ppo_update(PolicyParameters& params, const Trajectory& traj, const AgentConfig& cfg);

struct TrainingLogRow {
  long long episode = 0;
  double mean_reward = 0.0;
  double actor_loss = 0.0;
  double critic_loss = 0.0;
  double entropy = 0.0;
};

struct TrainResult {
  PolicyParameters params;
  std::vector<TrainingLogRow> log;
};

/// On-policy training on random sinusoids; one update per episode.
/// Parameters are initialized from the "init" child of rng and episodes
/// are drawn from its "episodes" child.
TrainResult train(const AgentConfig& cfg, const EpisodeConfig& episodes, const Rng& rng,
                  const RewardConfig& reward_cfg = {},
                  const std::function<void(const TrainingLogRow&)>& on_episode = {});

/// Initial parameters train() starts from for a given rng.
PolicyParameters initial_parameters(const Rng& rng, const Architecture& arch = Architecture::standard());

// Checkpoints ---------------------------------------------------------------

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  PolicyParameters params;
  AgentConfig config;
  std::uint64_t seed = 0;
  std::uint64_t episodes = 0;
};

class CheckpointError : public std::runtime_error {
 public:
  enum class Kind { Io, Version, Architecture, Corrupt };
  CheckpointError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

std::vector<unsigned char> serialize_checkpoint(const Checkpoint& ckpt);
Checkpoint deserialize_checkpoint(std::span<const unsigned char> bytes,
                                  const Architecture& expected = Architecture::standard());

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path,
                           const Architecture& expected = Architecture::standard());

}  // namespace padapt

#endif  // PADAPT_PPO_HPP_
