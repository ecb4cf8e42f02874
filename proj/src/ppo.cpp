#include "padapt/ppo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>

namespace padapt {

// Mlp -----------------------------------------------------------------------

Mlp::Mlp(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("Mlp: need at least input and output sizes");
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    if (sizes_[l] < 1 || sizes_[l + 1] < 1) throw std::invalid_argument("Mlp: empty layer");
    offsets_.push_back(offset);
    offset += static_cast<std::size_t>(sizes_[l + 1]) * (sizes_[l] + 1);
  }
  params_.assign(offset, 0.0);
}

void Mlp::initialize(Rng& rng, double output_scale) {
  std::fill(params_.begin(), params_.end(), 0.0);
  for (std::size_t l = 0; l < num_layers(); ++l) {
    const int fan_in = sizes_[l];
    const int fan_out = sizes_[l + 1];
    double limit = std::sqrt(6.0 / (fan_in + fan_out));
    if (l + 1 == num_layers()) limit *= output_scale;
    const std::size_t w = weight_offset(l);
    for (std::size_t i = 0; i < static_cast<std::size_t>(fan_in) * fan_out; ++i) {
      params_[w + i] = rng.uniform(-limit, limit);
    }
  }
}

std::vector<double> Mlp::forward(std::span<const double> x, Activations* acts) const {
  if (x.size() != static_cast<std::size_t>(input_size())) {
    throw std::invalid_argument("Mlp::forward: input size mismatch");
  }
  std::vector<double> a(x.begin(), x.end());
  if (acts) {
    acts->clear();
    acts->push_back(a);
  }
  for (std::size_t l = 0; l < num_layers(); ++l) {
    const auto in = static_cast<std::size_t>(sizes_[l]);
    const auto out = static_cast<std::size_t>(sizes_[l + 1]);
    const double* w = params_.data() + weight_offset(l);
    const double* b = params_.data() + bias_offset(l);
    std::vector<double> z(out);
    for (std::size_t o = 0; o < out; ++o) {
      double acc = b[o];
      const double* row = w + o * in;
      for (std::size_t i = 0; i < in; ++i) acc += row[i] * a[i];
      z[o] = (l + 1 == num_layers()) ? acc : std::tanh(acc);
    }
    a = std::move(z);
    if (acts) acts->push_back(a);
  }
  return a;
}

void Mlp::backward(const Activations& acts, std::span<const double> grad_out,
                   std::span<double> grad) const {
  std::vector<double> delta(grad_out.begin(), grad_out.end());
  for (std::size_t l = num_layers(); l-- > 0;) {
    const auto in = static_cast<std::size_t>(sizes_[l]);
    const auto out = static_cast<std::size_t>(sizes_[l + 1]);
    const auto& a_in = acts[l];
    double* gw = grad.data() + weight_offset(l);
    double* gb = grad.data() + bias_offset(l);
    const double* w = params_.data() + weight_offset(l);
    for (std::size_t o = 0; o < out; ++o) {
      gb[o] += delta[o];
      double* grow = gw + o * in;
      for (std::size_t i = 0; i < in; ++i) grow[i] += delta[o] * a_in[i];
    }
    if (l == 0) break;
    // Propagate through W and the tanh of the layer below.
    std::vector<double> prev(in, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      const double* row = w + o * in;
      for (std::size_t i = 0; i < in; ++i) prev[i] += row[i] * delta[o];
    }
    for (std::size_t i = 0; i < in; ++i) prev[i] *= 1.0 - a_in[i] * a_in[i];
    delta = std::move(prev);
  }
}

// Parameters ----------------------------------------------------------------

namespace {

AdamState fresh_adam(std::size_t n) { return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)}; }

constexpr double kOutputInitScale = 0.01;

}  // namespace

PolicyParameters PolicyParameters::create(Rng& rng, const Architecture& arch) {
  PolicyParameters p = zeros(arch);
  p.actor.initialize(rng, kOutputInitScale);
  p.critic.initialize(rng, kOutputInitScale);
  return p;
}

PolicyParameters PolicyParameters::zeros(const Architecture& arch) {
  if (arch.actor.back() != kNumActions) throw std::invalid_argument("actor must output 3 logits");
  if (arch.critic.back() != 1) throw std::invalid_argument("critic must output one value");
  PolicyParameters p;
  p.actor = Mlp(arch.actor);
  p.critic = Mlp(arch.critic);
  p.actor_adam = fresh_adam(p.actor.params().size());
  p.critic_adam = fresh_adam(p.critic.params().size());
  return p;
}

PolicyParameters initial_parameters(const Rng& rng, const Architecture& arch) {
  Rng init = rng.split("init");
  return PolicyParameters::create(init, arch);
}

void AgentConfig::validate() const {
  if (!(discount > 0.0 && discount <= 1.0)) throw std::invalid_argument("AgentConfig: discount must be in (0, 1]");
  if (!(clip_ratio > 0.0 && clip_ratio < 1.0)) throw std::invalid_argument("AgentConfig: clip_ratio must be in (0, 1)");
  if (!(exploration >= 0.0 && exploration < 1.0)) throw std::invalid_argument("AgentConfig: exploration must be in [0, 1)");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("AgentConfig: learning_rate must be > 0");
  if (!(gae_lambda >= 0.0 && gae_lambda <= 1.0)) throw std::invalid_argument("AgentConfig: gae_lambda must be in [0, 1]");
  if (epochs_per_update < 1) throw std::invalid_argument("AgentConfig: epochs_per_update must be >= 1");
}

// Policy --------------------------------------------------------------------

namespace {

std::array<double, kInputSize> encode(const AgentObservation& obs) {
  return {static_cast<double>(obs.p), obs.e};
}

ActionChoice choose(const std::array<double, kNumActions>& logits, ActionMode mode, Rng& rng,
                    double epsilon) {
  const auto logp = log_softmax(logits);
  if (mode == ActionMode::Greedy) {
    const Action a = greedy_action(logits);
    return {a, logp[static_cast<std::size_t>(a)]};
  }
  int index;
  if (epsilon > 0.0 && rng.uniform() < epsilon) {
    index = rng.uniform_int(0, kNumActions - 1);
  } else {
    const double u = rng.uniform();
    double cumulative = 0.0;
    index = kNumActions - 1;
    for (int k = 0; k < kNumActions; ++k) {
      cumulative += std::exp(logp[static_cast<std::size_t>(k)]);
      if (u < cumulative) {
        index = k;
        break;
      }
    }
  }
  return {static_cast<Action>(index), logp[static_cast<std::size_t>(index)]};
}

}  // namespace

std::array<double, kNumActions> log_softmax(const std::array<double, kNumActions>& logits) {
  const double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double l : logits) sum += std::exp(l - mx);
  const double log_sum = std::log(sum);
  std::array<double, kNumActions> out{};
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = (logits[k] - mx) - log_sum;
  return out;
}

std::array<double, kNumActions> softmax(const std::array<double, kNumActions>& logits) {
  const double mx = *std::max_element(logits.begin(), logits.end());
  std::array<double, kNumActions> out{};
  double sum = 0.0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = std::exp(logits[k] - mx);
    sum += out[k];
  }
  for (auto& v : out) v /= sum;
  return out;
}

Action greedy_action(const std::array<double, kNumActions>& logits) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < logits.size(); ++k) {
    if (logits[k] > logits[best]) best = k;
  }
  return static_cast<Action>(best);
}

PolicyOutput policy_forward(const PolicyParameters& params, const AgentObservation& obs) {
  const auto x = encode(obs);
  const auto logits = params.actor.forward(x);
  const auto value = params.critic.forward(x);
  PolicyOutput out;
  std::copy(logits.begin(), logits.end(), out.logits.begin());
  out.value = value[0];
  return out;
}

std::array<double, kNumActions> actor_logits(const PolicyParameters& params, const AgentObservation& obs) {
  const auto x = encode(obs);
  const auto logits = params.actor.forward(x);
  std::array<double, kNumActions> out{};
  std::copy(logits.begin(), logits.end(), out.begin());
  return out;
}

ActionChoice select_action(const PolicyParameters& params, const AgentObservation& obs,
                           ActionMode mode, Rng& rng, double epsilon) {
  return choose(policy_forward(params, obs).logits, mode, rng, epsilon);
}

// Advantages ----------------------------------------------------------------

Advantages compute_advantages(const Trajectory& traj, double gamma, double lambda, bool normalize) {
  const std::size_t n = traj.steps.size();
  Advantages out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  double running = 0.0;
  for (std::size_t t = n; t-- > 0;) {
    const double next_value = (t + 1 < n) ? traj.steps[t + 1].value : 0.0;
    const double delta = traj.steps[t].reward + gamma * next_value - traj.steps[t].value;
    running = delta + gamma * lambda * running;
    out.advantages[t] = running;
    out.returns[t] = running + traj.steps[t].value;
  }
  if (normalize && n >= 2) {
    const double mean = std::accumulate(out.advantages.begin(), out.advantages.end(), 0.0) / n;
    double var = 0.0;
    for (double a : out.advantages) var += (a - mean) * (a - mean);
    var /= static_cast<double>(n);
    if (var >= 1e-8) {
      const double inv_std = 1.0 / std::sqrt(var);
      for (double& a : out.advantages) a = (a - mean) * inv_std;
    }
  }
  return out;
}

UpdateBatch make_batch(const Trajectory& traj, const AgentConfig& cfg) {
  for (const auto& s : traj.steps) {
    if (!std::isfinite(s.obs.e) || !std::isfinite(s.log_prob) || !std::isfinite(s.reward) ||
        !std::isfinite(s.value)) {
      throw NumericError("ppo_update: trajectory contains non-finite entries");
    }
  }
  auto adv = compute_advantages(traj, cfg.discount, cfg.gae_lambda, true);
  UpdateBatch batch;
  for (const auto& s : traj.steps) {
    batch.obs.push_back(s.obs);
    batch.actions.push_back(s.action);
    batch.old_log_probs.push_back(s.log_prob);
  }
  batch.advantages = std::move(adv.advantages);
  batch.returns = std::move(adv.returns);
  return batch;
}

// Loss and update -----------------------------------------------------------

LossBreakdown ppo_loss(const PolicyParameters& params, const UpdateBatch& batch,
                       const AgentConfig& cfg, Gradients* grads) {
  const std::size_t n = batch.obs.size();
  LossBreakdown loss;
  if (grads) {
    grads->actor.assign(params.actor.params().size(), 0.0);
    grads->critic.assign(params.critic.params().size(), 0.0);
  }
  if (n == 0) return loss;
  const double inv_n = 1.0 / static_cast<double>(n);
  Mlp::Activations actor_acts;
  Mlp::Activations critic_acts;
  for (std::size_t t = 0; t < n; ++t) {
    const auto x = encode(batch.obs[t]);
    const auto out = params.actor.forward(x, grads ? &actor_acts : nullptr);
    std::array<double, kNumActions> logits{};
    std::copy(out.begin(), out.end(), logits.begin());
    const auto logp = log_softmax(logits);
    std::array<double, kNumActions> prob{};
    double entropy = 0.0;
    for (std::size_t k = 0; k < prob.size(); ++k) {
      prob[k] = std::exp(logp[k]);
      entropy -= prob[k] * logp[k];
    }
    const auto a = static_cast<std::size_t>(batch.actions[t]);
    const double adv = batch.advantages[t];
    const double ratio = std::exp(logp[a] - batch.old_log_probs[t]);
    const double clipped = std::clamp(ratio, 1.0 - cfg.clip_ratio, 1.0 + cfg.clip_ratio);
    const double s1 = ratio * adv;
    const double s2 = clipped * adv;
    const bool unclipped_active = s1 <= s2;
    const double surrogate = unclipped_active ? s1 : s2;
    loss.surrogate += surrogate * inv_n;
    loss.entropy += entropy * inv_n;
    loss.actor_loss += (-surrogate - cfg.entropy_coefficient * entropy) * inv_n;

    const double v = params.critic.forward(x, grads ? &critic_acts : nullptr)[0];
    const double err = v - batch.returns[t];
    loss.critic_loss += cfg.value_loss_coefficient * err * err * inv_n;

    if (grads) {
      // d(-surrogate)/d(log pi_a); zero when the clipped branch is selected.
      const double g_logp = unclipped_active ? -adv * ratio : 0.0;
      std::array<double, kNumActions> g_logits{};
      for (std::size_t k = 0; k < g_logits.size(); ++k) {
        const double d_logp = (k == a ? 1.0 : 0.0) - prob[k];
        const double d_entropy = -prob[k] * (logp[k] + entropy);
        g_logits[k] = (g_logp * d_logp - cfg.entropy_coefficient * d_entropy) * inv_n;
      }
      params.actor.backward(actor_acts, g_logits, grads->actor);
      const double g_v = 2.0 * cfg.value_loss_coefficient * err * inv_n;
      params.critic.backward(critic_acts, std::span<const double>(&g_v, 1), grads->critic);
    }
  }
  return loss;
}

namespace {

void clip_norm(std::vector<double>& g, double max_norm) {
  if (max_norm <= 0.0) return;
  double sq = 0.0;
  for (double x : g) sq += x * x;
  const double norm = std::sqrt(sq);
  if (norm > max_norm) {
    const double s = max_norm / norm;
    for (double& x : g) x *= s;
  }
}

void adam_apply(std::vector<double>& theta, AdamState& st, const std::vector<double>& g,
                const AgentConfig& cfg, std::uint64_t t) {
  const double c1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(t));
  for (std::size_t i = 0; i < theta.size(); ++i) {
    st.m[i] = cfg.adam_beta1 * st.m[i] + (1.0 - cfg.adam_beta1) * g[i];
    st.v[i] = cfg.adam_beta2 * st.v[i] + (1.0 - cfg.adam_beta2) * g[i] * g[i];
    const double m_hat = st.m[i] / c1;
    const double v_hat = st.v[i] / c2;
    theta[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.adam_epsilon);
  }
}

}  // namespace

void adam_step(PolicyParameters& params, const Gradients& grads, const AgentConfig& cfg) {
  const std::uint64_t t = ++params.step_count;
  Gradients g = grads;
  clip_norm(g.actor, cfg.max_grad_norm);
  clip_norm(g.critic, cfg.max_grad_norm);
  adam_apply(params.actor.params(), params.actor_adam, g.actor, cfg, t);
  adam_apply(params.critic.params(), params.critic_adam, g.critic, cfg, t);
}

UpdateStats ppo_update(PolicyParameters& params, const Trajectory& traj, const AgentConfig& cfg) {
  const UpdateBatch batch = make_batch(traj, cfg);
  UpdateStats stats;
  Gradients grads;
  for (int epoch = 0; epoch < cfg.epochs_per_update; ++epoch) {
    const LossBreakdown loss = ppo_loss(params, batch, cfg, &grads);
    if (!std::isfinite(loss.total())) throw NumericError("ppo_update: non-finite loss");
    if (epoch == 0) stats.first_epoch = loss;
    stats.last_epoch = loss;
    adam_step(params, grads, cfg);
  }
  return stats;
}

// Training ------------------------------------------------------------------

TrainResult train(const AgentConfig& cfg, const EpisodeConfig& episodes, const Rng& rng,
                  const RewardConfig& reward_cfg,
                  const std::function<void(const TrainingLogRow&)>& on_episode) {
  cfg.validate();
  reward_cfg.validate();
  if (episodes.steps_per_episode < 1) throw std::invalid_argument("train: steps_per_episode must be >= 1");
  TrainResult result{initial_parameters(rng), {}};
  Rng episode_rng = rng.split("episodes");
  result.log.reserve(static_cast<std::size_t>(std::max(episodes.num_episodes, 0)));
  for (long long ep = 0; ep < episodes.num_episodes; ++ep) {
    const EpisodeStart start = episode_reset(episode_rng);
    const TargetFunction g = as_target(start.g);
    int p = start.p0;
    AgentObservation obs = start.obs0;
    Trajectory traj;
    traj.steps.reserve(static_cast<std::size_t>(episodes.steps_per_episode));
    double reward_sum = 0.0;
    for (int s = 0; s < episodes.steps_per_episode; ++s) {
      const PolicyOutput out = policy_forward(result.params, obs);
      const ActionChoice choice = choose(out.logits, ActionMode::Stochastic, episode_rng, cfg.exploration);
      const StepResult next = episode_step(g, p, choice.action, reward_cfg);
      traj.steps.push_back({obs, choice.action, choice.log_prob, next.reward, out.value});
      reward_sum += next.reward;
      p = next.p;
      obs = next.obs;
    }
    const UpdateStats stats = ppo_update(result.params, traj, cfg);
    TrainingLogRow row{ep, reward_sum / episodes.steps_per_episode, stats.first_epoch.actor_loss,
                       stats.first_epoch.critic_loss, stats.first_epoch.entropy};
    result.log.push_back(row);
    if (on_episode) on_episode(row);
  }
  return result;
}

// Checkpoints ---------------------------------------------------------------
//
// Layout (all integers and floats little-endian):
//   "PADAPTCK"  u32 version
//   u32 n, u32 sizes[n]   actor layer sizes
//   u32 n, u32 sizes[n]   critic layer sizes
//   f64 x12 AgentConfig (epochs stored as f64)
//   u64 seed, u64 episodes, u64 step_count
//   for actor then critic: u64 count, f64 params[count], f64 m[count], f64 v[count]
//   u64 FNV-1a hash of every preceding byte

namespace {

constexpr char kMagic[8] = {'P', 'A', 'D', 'A', 'P', 'T', 'C', 'K'};

std::uint64_t fnv1a(std::span<const unsigned char> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Writer {
 public:
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
  void raw(const char* s, std::size_t n) { bytes_.insert(bytes_.end(), s, s + n); }
  std::vector<unsigned char>& bytes() { return bytes_; }

 private:
  void put(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) bytes_.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  std::vector<unsigned char> bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const unsigned char> bytes) : bytes_(bytes) {}
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  double f64() { return std::bit_cast<double>(get(8)); }
  std::span<const unsigned char> raw(std::size_t n) {
    need(n);
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw CheckpointError(CheckpointError::Kind::Corrupt, "checkpoint truncated");
  }
  std::uint64_t get(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }
  std::span<const unsigned char> bytes_;
  std::size_t pos_ = 0;
};

void write_sizes(Writer& w, const std::vector<int>& sizes) {
  w.u32(static_cast<std::uint32_t>(sizes.size()));
  for (int s : sizes) w.u32(static_cast<std::uint32_t>(s));
}

std::vector<int> read_sizes(Reader& r) {
  const std::uint32_t n = r.u32();
  if (n < 2 || n > 64) throw CheckpointError(CheckpointError::Kind::Corrupt, "implausible layer count");
  std::vector<int> sizes;
  for (std::uint32_t i = 0; i < n; ++i) sizes.push_back(static_cast<int>(r.u32()));
  return sizes;
}

void write_vec(Writer& w, const std::vector<double>& v) {
  for (double x : v) w.f64(x);
}

void read_vec(Reader& r, std::vector<double>& v) {
  for (double& x : v) x = r.f64();
}

std::string describe(const std::vector<int>& sizes) {
  std::string s;
  for (std::size_t i = 0; i < sizes.size(); ++i) s += (i ? "-" : "") + std::to_string(sizes[i]);
  return s;
}

}  // namespace

std::vector<unsigned char> serialize_checkpoint(const Checkpoint& ckpt) {
  Writer w;
  w.raw(kMagic, sizeof(kMagic));
  w.u32(kCheckpointVersion);
  write_sizes(w, ckpt.params.actor.sizes());
  write_sizes(w, ckpt.params.critic.sizes());
  const AgentConfig& c = ckpt.config;
  for (double v : {c.learning_rate, c.exploration, c.discount, c.clip_ratio, c.gae_lambda,
                   static_cast<double>(c.epochs_per_update), c.entropy_coefficient,
                   c.value_loss_coefficient, c.adam_beta1, c.adam_beta2, c.adam_epsilon,
                   c.max_grad_norm}) {
    w.f64(v);
  }
  w.u64(ckpt.seed);
  w.u64(ckpt.episodes);
  w.u64(ckpt.params.step_count);
  for (const auto* net : {&ckpt.params.actor, &ckpt.params.critic}) {
    const AdamState& adam = (net == &ckpt.params.actor) ? ckpt.params.actor_adam : ckpt.params.critic_adam;
    w.u64(net->params().size());
    write_vec(w, net->params());
    write_vec(w, adam.m);
    write_vec(w, adam.v);
  }
  const std::uint64_t hash = fnv1a(w.bytes());
  w.u64(hash);
  return std::move(w.bytes());
}

Checkpoint deserialize_checkpoint(std::span<const unsigned char> bytes, const Architecture& expected) {
  Reader r(bytes);
  const auto magic = r.raw(sizeof(kMagic));
  if (!std::equal(magic.begin(), magic.end(), kMagic)) {
    throw CheckpointError(CheckpointError::Kind::Corrupt, "not a checkpoint file (bad magic)");
  }
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    throw CheckpointError(CheckpointError::Kind::Version,
                          "checkpoint version " + std::to_string(version) + ", expected " +
                              std::to_string(kCheckpointVersion));
  }
  if (bytes.size() < 8 + 8 + 4) throw CheckpointError(CheckpointError::Kind::Corrupt, "checkpoint truncated");
  const auto body = bytes.first(bytes.size() - 8);
  Reader tail(bytes.subspan(bytes.size() - 8));
  if (fnv1a(body) != tail.u64()) {
    throw CheckpointError(CheckpointError::Kind::Corrupt, "checkpoint checksum mismatch");
  }

  Architecture arch{read_sizes(r), read_sizes(r)};
  if (!(arch == expected)) {
    throw CheckpointError(CheckpointError::Kind::Architecture,
                          "checkpoint architecture actor " + describe(arch.actor) + " / critic " +
                              describe(arch.critic) + " does not match expected actor " +
                              describe(expected.actor) + " / critic " + describe(expected.critic));
  }
  Checkpoint ckpt;
  AgentConfig& c = ckpt.config;
  c.learning_rate = r.f64();
  c.exploration = r.f64();
  c.discount = r.f64();
  c.clip_ratio = r.f64();
  c.gae_lambda = r.f64();
  c.epochs_per_update = static_cast<int>(r.f64());
  c.entropy_coefficient = r.f64();
  c.value_loss_coefficient = r.f64();
  c.adam_beta1 = r.f64();
  c.adam_beta2 = r.f64();
  c.adam_epsilon = r.f64();
  c.max_grad_norm = r.f64();
  ckpt.seed = r.u64();
  ckpt.episodes = r.u64();
  ckpt.params = PolicyParameters::zeros(arch);
  ckpt.params.step_count = r.u64();
  for (int which = 0; which < 2; ++which) {
    Mlp& net = which == 0 ? ckpt.params.actor : ckpt.params.critic;
    AdamState& adam = which == 0 ? ckpt.params.actor_adam : ckpt.params.critic_adam;
    if (r.u64() != net.params().size()) {
      throw CheckpointError(CheckpointError::Kind::Corrupt, "parameter count disagrees with layer sizes");
    }
    read_vec(r, net.params());
    read_vec(r, adam.m);
    read_vec(r, adam.v);
  }
  if (r.remaining() != 8) throw CheckpointError(CheckpointError::Kind::Corrupt, "unexpected trailing bytes");
  return ckpt;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  const auto bytes = serialize_checkpoint(ckpt);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw CheckpointError(CheckpointError::Kind::Io, "cannot open " + path.string() + " for writing");
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw CheckpointError(CheckpointError::Kind::Io, "failed writing " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path, const Architecture& expected) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw CheckpointError(CheckpointError::Kind::Io, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return deserialize_checkpoint(bytes, expected);
}

}  // namespace padapt
