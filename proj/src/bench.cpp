#include "padapt/bench.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <limits>
#include <sstream>

#include "padapt/quadrature.hpp"

namespace padapt {

namespace fs = std::filesystem;

// Settings ---------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(x)) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("invalid number for '" + key + "': '" + v + "'");
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("invalid integer for '" + key + "': '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "off" || v == "no") return false;
  throw ConfigError("invalid boolean for '" + key + "': '" + v + "'");
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

std::string hex64(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

void Settings::set(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  auto as_int = [&] { return static_cast<int>(parse_int(key, v)); };
  auto as_double = [&] { return parse_double(key, v); };
  if (key == "seed") {
    const long long x = parse_int(key, v);
    if (x < 0) throw ConfigError("seed must be non-negative");
    seed = static_cast<std::uint64_t>(x);
  } else if (key == "episodes") {
    episodes.num_episodes = as_int();
  } else if (key == "steps_per_episode") {
    episodes.steps_per_episode = as_int();
  } else if (key == "learning_rate") {
    agent.learning_rate = as_double();
  } else if (key == "exploration") {
    agent.exploration = as_double();
  } else if (key == "discount") {
    agent.discount = as_double();
  } else if (key == "clip_ratio") {
    agent.clip_ratio = as_double();
  } else if (key == "gae_lambda") {
    agent.gae_lambda = as_double();
  } else if (key == "epochs_per_update") {
    agent.epochs_per_update = as_int();
  } else if (key == "entropy_coefficient") {
    agent.entropy_coefficient = as_double();
  } else if (key == "value_loss_coefficient") {
    agent.value_loss_coefficient = as_double();
  } else if (key == "max_grad_norm") {
    agent.max_grad_norm = as_double();
  } else if (key == "sigma") {
    reward.sigma = as_double();
  } else if (key == "elements") {
    elements = as_int();
  } else if (key == "order") {
    order = as_int();
  } else if (key == "dt") {
    dt = as_double();
  } else if (key == "t_end") {
    t_end = as_double();
  } else if (key == "delta") {
    adapt.delta = as_double();
  } else if (key == "adapt_interval_steps") {
    adapt.adapt_interval_steps = as_int();
  } else if (key == "adapt_at_start") {
    adapt.adapt_at_start = parse_bool(key, v);
  } else if (key == "n_sets") {
    n_sets = as_int();
  } else if (key == "set_size") {
    set_size = as_int();
  } else if (key == "timing_repeats") {
    timing_repeats = as_int();
  } else if (key == "snapshot_times") {
    std::vector<double> times;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!trim(item).empty()) times.push_back(parse_double(key, trim(item)));
    }
    snapshot_times = std::move(times);
  } else {
    throw ConfigError("unknown setting '" + key + "'");
  }
}

std::vector<std::pair<std::string, std::string>> Settings::entries() const {
  std::string snaps;
  for (std::size_t i = 0; i < snapshot_times.size(); ++i) snaps += (i ? "," : "") + fmt(snapshot_times[i]);
  return {
      {"seed", std::to_string(seed)},
      {"episodes", std::to_string(episodes.num_episodes)},
      {"steps_per_episode", std::to_string(episodes.steps_per_episode)},
      {"learning_rate", fmt(agent.learning_rate)},
      {"exploration", fmt(agent.exploration)},
      {"discount", fmt(agent.discount)},
      {"clip_ratio", fmt(agent.clip_ratio)},
      {"gae_lambda", fmt(agent.gae_lambda)},
      {"epochs_per_update", std::to_string(agent.epochs_per_update)},
      {"entropy_coefficient", fmt(agent.entropy_coefficient)},
      {"value_loss_coefficient", fmt(agent.value_loss_coefficient)},
      {"max_grad_norm", fmt(agent.max_grad_norm)},
      {"sigma", fmt(reward.sigma)},
      {"elements", std::to_string(elements)},
      {"order", std::to_string(order)},
      {"dt", fmt(dt)},
      {"t_end", fmt(t_end)},
      {"delta", fmt(adapt.delta)},
      {"adapt_interval_steps", std::to_string(adapt.adapt_interval_steps)},
      {"adapt_at_start", adapt.adapt_at_start ? "true" : "false"},
      {"n_sets", std::to_string(n_sets)},
      {"set_size", std::to_string(set_size)},
      {"timing_repeats", std::to_string(timing_repeats)},
      {"snapshot_times", snaps},
  };
}

SolverConfig Settings::solver() const {
  SolverConfig cfg;
  cfg.dt = dt;
  cfg.t_end = t_end;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

Settings load_config_file(const fs::path& path, Settings base) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    }
    base.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

// Manifest and CSV -------------------------------------------------------------

std::string RunManifest::hash() const {
  std::string canon = subcommand + "\n";
  for (const auto& [k, v] : settings.entries()) canon += k + "=" + v + "\n";
  return hex64(fnv1a(canon));
}

void RunManifest::write(const fs::path& path) const {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  os << "manifest = " << hash() << "\n";
  os << "subcommand = " << subcommand << "\n";
  os << "tool_version = " << tool_version << "\n";
  os << "timestamp = " << timestamp << "\n";
  os << "out = " << out_dir << "\n";
  for (const auto& [k, v] : settings.entries()) os << k << " = " << v << "\n";
  if (!os) throw IoError("failed writing " + path.string());
}

RunManifest make_manifest(const std::string& subcommand, const Settings& settings, const fs::path& out_dir) {
  RunManifest m;
  m.subcommand = subcommand;
  m.settings = settings;
  m.out_dir = out_dir.string();
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  m.timestamp = buf;
  return m;
}

CsvWriter::CsvWriter(const fs::path& path, const std::string& manifest_hash,
                     const std::vector<std::string>& header)
    : path_(path), os_(path) {
  if (!os_) throw IoError("cannot write " + path.string());
  os_ << std::setprecision(17);
  os_ << "# manifest: " << manifest_hash << "\n";
  for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
  os_ << '\n';
}

void CsvWriter::close() {
  os_.close();
  if (os_.fail()) throw IoError("failed writing " + path_.string());
}

namespace {

fs::path prepare_out_dir(const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) throw IoError("cannot create output directory " + out_dir.string());
  return out_dir;
}

RunManifest start_run(const std::string& sub, const Settings& s, const fs::path& out_dir) {
  prepare_out_dir(out_dir);
  RunManifest m = make_manifest(sub, s, out_dir);
  m.write(out_dir / "manifest.txt");
  return m;
}

void write_snapshot(const fs::path& path, const std::string& hash, const MeshState& mesh) {
  CsvWriter csv(path, hash, {"element_index", "p", "x", "u"});
  for (std::size_t e = 0; e < mesh.size(); ++e) {
    const auto& el = mesh.elements[e];
    const auto x = el.node_coordinates();
    for (std::size_t i = 0; i < x.size(); ++i) csv.row(e, el.p, x[i], el.values[i]);
  }
  csv.close();
}

std::string snapshot_name(double t) {
  std::ostringstream os;
  os << "snapshot_t" << std::fixed << std::setprecision(4) << t << ".csv";
  return os.str();
}

// Collects copies of the mesh at the requested times (t <= t_end) keyed by step index.
class SnapshotRecorder {
 public:
  SnapshotRecorder(const std::vector<double>& times, const SolverConfig& cfg) {
    const StepPlan plan = plan_steps(0.0, cfg.t_end, cfg.dt);
    for (double t : times) {
      if (t < 0.0 || t > cfg.t_end + 0.5 * cfg.dt) continue;
      long long step = std::llround(t / cfg.dt);
      if (step > plan.steps) step = plan.steps;
      wanted_.emplace_back(step, t);
    }
  }
  bool wants_initial() const {
    for (const auto& w : wanted_) if (w.first == 0) return true;
    return false;
  }
  void record_initial(const MeshState& mesh) {
    for (const auto& w : wanted_) if (w.first == 0) taken_.emplace_back(w.second, mesh);
  }
  StepObserver observer() {
    return [this](const MeshState& mesh, long long step) {
      for (const auto& w : wanted_) if (w.first == step) taken_.emplace_back(w.second, mesh);
    };
  }
  void write_all(const fs::path& dir, const std::string& hash) const {
    for (const auto& [t, mesh] : taken_) write_snapshot(dir / snapshot_name(t), hash, mesh);
  }

 private:
  std::vector<std::pair<long long, double>> wanted_;
  std::vector<std::pair<double, MeshState>> taken_;
};

OrderPolicy policy_from_checkpoint(const fs::path& checkpoint) {
  return greedy_policy(load_checkpoint(checkpoint).params);
}

}  // namespace

// Test protocol ----------------------------------------------------------------

RolloutPolicy rollout_policy(const OrderPolicy& policy) {
  return [policy](const AgentObservation& obs, const RandomFunction&) { return policy(obs); };
}

RolloutPolicy oracle_rollout_policy(const RewardConfig& cfg) {
  return [cfg](const AgentObservation& obs, const RandomFunction& g) {
    const int target = optimal_p(as_target(g), cfg).p;
    if (obs.p < target) return Action::Increase;
    if (obs.p > target) return Action::Decrease;
    return Action::Keep;
  };
}

TestReport evaluate_test_sets(const RolloutPolicy& policy, int n_sets, int set_size, int steps, Rng rng,
                              const RewardConfig& cfg) {
  if (n_sets < 1 || set_size < 1 || steps < 0) throw ConfigError("invalid test-set dimensions");
  TestReport report;
  int exact_total = 0;
  for (int set = 0; set < n_sets; ++set) {
    double reward_final_sum = 0.0;
    double reward_opt_sum = 0.0;
    double abs_err_sum = 0.0;
    int exact = 0;
    for (int ep = 0; ep < set_size; ++ep) {
      const EpisodeStart start = episode_reset(rng);
      const TargetFunction g = as_target(start.g);
      int p = start.p0;
      AgentObservation obs = start.obs0;
      double reward = compute_reward(g, p, cfg);
      for (int s = 0; s < steps; ++s) {
        const StepResult next = episode_step(g, p, policy(obs, start.g), cfg);
        p = next.p;
        obs = next.obs;
        reward = next.reward;
      }
      const OptimalOrder best = optimal_p(g, cfg);
      const int err = std::abs(p - best.p);
      report.episodes.push_back({set, ep, start.g, start.p0, p, best.p, reward, best.reward});
      report.histogram[static_cast<std::size_t>(err)] += 1;
      reward_final_sum += reward;
      reward_opt_sum += best.reward;
      abs_err_sum += err;
      exact += err == 0 ? 1 : 0;
    }
    report.sets.push_back({set, reward_final_sum / reward_opt_sum, abs_err_sum / set_size,
                           static_cast<double>(exact) / set_size});
    exact_total += exact;
  }
  report.exact_fraction = static_cast<double>(exact_total) / (static_cast<double>(n_sets) * set_size);
  return report;
}

// Subcommands --------------------------------------------------------------------

TrainOutcome cmd_train(const Settings& s, const fs::path& out_dir) {
  const RunManifest m = start_run("train", s, out_dir);
  try {
    s.agent.validate();
    s.reward.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (s.episodes.num_episodes < 0) throw ConfigError("episodes must be >= 0");
  CsvWriter log(out_dir / "training_log.csv", m.hash(),
                {"episode", "mean_reward", "actor_loss", "critic_loss", "entropy"});
  TrainResult result = train(s.agent, s.episodes, Rng(s.seed), s.reward, [&](const TrainingLogRow& r) {
    log.row(r.episode, r.mean_reward, r.actor_loss, r.critic_loss, r.entropy);
  });
  log.close();
  TrainOutcome out;
  out.checkpoint.params = std::move(result.params);
  out.checkpoint.config = s.agent;
  out.checkpoint.seed = s.seed;
  out.checkpoint.episodes = static_cast<std::uint64_t>(s.episodes.num_episodes);
  out.log = std::move(result.log);
  out.checkpoint_path = out_dir / "agent.ckpt";
  save_checkpoint(out.checkpoint, out.checkpoint_path);
  return out;
}

TestReport cmd_test(const RolloutPolicy& policy, const Settings& s, const fs::path& out_dir) {
  const RunManifest m = start_run("test", s, out_dir);
  const TestReport report = evaluate_test_sets(policy, s.n_sets, s.set_size, s.episodes.steps_per_episode,
                                               Rng(s.seed).split("test"), s.reward);
  CsvWriter eps(out_dir / "test_episodes.csv", m.hash(),
                {"set_id", "episode_id", "a", "c", "f", "p_final", "p_opt", "reward_final", "reward_opt"});
  for (const auto& e : report.episodes) {
    eps.row(e.set_id, e.episode_id, e.g.a, e.g.c, e.g.f, e.p_final, e.p_opt, e.reward_final, e.reward_opt);
  }
  eps.close();
  CsvWriter sets(out_dir / "test_sets.csv", m.hash(),
                 {"set_id", "reward_accuracy", "mean_abs_p_error", "exact_fraction"});
  for (const auto& t : report.sets) sets.row(t.set_id, t.reward_accuracy, t.mean_abs_error, t.exact_fraction);
  sets.close();
  CsvWriter hist(out_dir / "p_error_histogram.csv", m.hash(), {"abs_p_error", "count"});
  for (std::size_t k = 0; k < report.histogram.size(); ++k) hist.row(k, report.histogram[k]);
  hist.close();
  return report;
}

TestReport cmd_test(const fs::path& checkpoint, const Settings& s, const fs::path& out_dir) {
  return cmd_test(rollout_policy(policy_from_checkpoint(checkpoint)), s, out_dir);
}

SimulateOutcome cmd_simulate(const Settings& s, const fs::path& out_dir) {
  const SolverConfig cfg = s.solver();
  if (s.elements < 1 || s.order < 1 || s.order > kMaxCachedDegree) {
    throw ConfigError("simulate: need elements >= 1 and 1 <= order <= " + std::to_string(kMaxCachedDegree));
  }
  const RunManifest m = start_run("simulate", s, out_dir);
  SnapshotRecorder snaps(s.snapshot_times, cfg);
  if (snaps.wants_initial()) snaps.record_initial(make_uniform_mesh(s.elements, s.order));
  SimulateOutcome out;
  const auto start = std::chrono::steady_clock::now();
  out.mesh = simulate_uniform(s.elements, s.order, cfg, snaps.observer());
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.rmse = global_rmse(out.mesh);
  snaps.write_all(out_dir, m.hash());
  write_snapshot(out_dir / "final_state.csv", m.hash(), out.mesh);
  CsvWriter metrics(out_dir / "metrics.csv", m.hash(), {"K", "p", "dt", "t_end", "rmse", "wall_seconds"});
  metrics.row(s.elements, s.order, s.dt, s.t_end, out.rmse, out.wall_seconds);
  metrics.close();
  return out;
}

AdaptedRun cmd_adapt(const OrderPolicy& policy, const Settings& s, const fs::path& out_dir) {
  const SolverConfig cfg = s.solver();
  try {
    s.adapt.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (s.elements < 1 || s.order < s.adapt.p_min || s.order > s.adapt.p_max) {
    throw ConfigError("adapt: need elements >= 1 and a starting order within [p_min, p_max]");
  }
  const RunManifest m = start_run("adapt", s, out_dir);
  SnapshotRecorder snaps(s.snapshot_times, cfg);
  if (snaps.wants_initial()) snaps.record_initial(make_uniform_mesh(s.elements, s.order));
  AdaptedRun run = run_adapted_simulation(s.elements, s.order, policy, cfg, s.adapt, snaps.observer());
  snaps.write_all(out_dir, m.hash());
  write_snapshot(out_dir / "final_state.csv", m.hash(), run.mesh);

  CsvWriter metrics(out_dir / "metrics.csv", m.hash(), {"K", "p0", "delta", "rmse", "p_av", "wall_seconds"});
  metrics.row(s.elements, s.order, s.adapt.delta, run.metrics.rmse, run.metrics.p_av, run.metrics.wall_seconds);
  metrics.close();

  CsvWriter history(out_dir / "order_history.csv", m.hash(), {"time", "element_index", "p"});
  for (int e = 0; e < s.elements; ++e) history.row(0.0, e, s.order);
  for (const auto& ev : run.events) history.row(ev.time, ev.element_index, ev.p_after);
  history.close();

  CsvWriter events(out_dir / "adaptation_events.csv", m.hash(),
                   {"time", "element_index", "p_before", "p_after", "e_raw", "e_scaled", "action"});
  for (const auto& ev : run.events) {
    events.row(ev.time, ev.element_index, ev.p_before, ev.p_after, ev.e_raw, ev.e_scaled, to_string(ev.action));
  }
  events.close();
  return run;
}

AdaptedRun cmd_adapt(const fs::path& checkpoint, const Settings& s, const fs::path& out_dir) {
  return cmd_adapt(policy_from_checkpoint(checkpoint), s, out_dir);
}

// Bench --------------------------------------------------------------------------

namespace {

std::string delta_label(double delta) {
  std::ostringstream os;
  os << "adapt_d" << std::fixed << std::setprecision(1) << delta;
  return os.str();
}

}  // namespace

std::string BenchCell::label() const {
  if (!adapted) return "uniform_p" + std::to_string(order);
  return delta_label(delta);
}

const BenchCell* BenchReport::uniform(int elements, int order) const {
  for (const auto& c : cells) {
    if (!c.adapted && c.elements == elements && c.order == order) return &c;
  }
  return nullptr;
}

const BenchCell* BenchReport::adapted(int elements, double delta) const {
  for (const auto& c : cells) {
    if (c.adapted && c.elements == elements && std::abs(c.delta - delta) < 1e-12) return &c;
  }
  return nullptr;
}

std::string BenchReport::best_tradeoff(int elements) const {
  std::vector<const BenchCell*> candidates{uniform(elements, 4)};
  for (double d : kBenchDeltas) candidates.push_back(adapted(elements, d));
  const BenchCell* best = nullptr;
  for (const auto* c : candidates) {
    if (c && c->ok && (!best || c->tradeoff() < best->tradeoff())) best = c;
  }
  return best ? best->label() : "";
}

namespace {

template <typename Run>
double min_wall_time(int repeats, Run&& run) {
  run();  // warm-up, not timed
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(repeats, 1); ++r) best = std::min(best, run());
  return best;
}

std::string cell_value(const BenchCell* c, double BenchCell::*field) {
  if (!c || !c->ok) return "NA";
  return fmt(c->*field);
}

}  // namespace

BenchReport cmd_bench(const OrderPolicy& policy, const Settings& s, const fs::path& out_dir) {
  const SolverConfig cfg = s.solver();
  const RunManifest m = start_run("bench", s, out_dir);
  BenchReport report;

  // Warm-up, excluded from every table.
  (void)simulate_uniform(kBenchElements.front(), kBenchOrders.front(), cfg);

  for (int k : kBenchElements) {
    for (int p : kBenchOrders) {
      BenchCell cell;
      cell.elements = k;
      cell.order = p;
      cell.p_av = p;
      try {
        MeshState final_mesh;
        cell.wall_seconds = min_wall_time(s.timing_repeats, [&] {
          const auto t0 = std::chrono::steady_clock::now();
          final_mesh = simulate_uniform(k, p, cfg);
          return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        });
        cell.rmse = global_rmse(final_mesh);
      } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = e.what();
      }
      report.cells.push_back(cell);
    }
    for (double d : kBenchDeltas) {
      BenchCell cell;
      cell.elements = k;
      cell.adapted = true;
      cell.order = s.order;
      cell.delta = d;
      AdaptConfig acfg = s.adapt;
      acfg.delta = d;
      try {
        AdaptedRun run;
        cell.wall_seconds = min_wall_time(s.timing_repeats, [&] {
          run = run_adapted_simulation(k, s.order, policy, cfg, acfg);
          return run.metrics.wall_seconds;
        });
        cell.rmse = run.metrics.rmse;
        cell.p_av = run.metrics.p_av;
      } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = e.what();
      }
      report.cells.push_back(cell);
    }
  }

  const std::string hash = m.hash();
  CsvWriter runs(out_dir / "bench_runs.csv", hash,
                 {"K", "mode", "p", "delta", "rmse", "p_av", "wall_seconds", "tradeoff", "status"});
  for (const auto& c : report.cells) {
    runs.row(c.elements, c.adapted ? "adapted" : "uniform", c.order, c.delta, c.rmse, c.p_av, c.wall_seconds,
             c.tradeoff(), c.ok ? std::string("ok") : "failed: " + c.error);
  }
  runs.close();

  std::vector<std::string> wide{"K"};
  for (int p : kBenchOrders) wide.push_back("uniform_p" + std::to_string(p));
  for (double d : kBenchDeltas) wide.push_back(delta_label(d));
  for (double d : kBenchDeltas) wide.push_back("p_av_" + delta_label(d));

  for (const auto& [name, field] : {std::pair{"error_table.csv", &BenchCell::rmse},
                                    std::pair{"time_table.csv", &BenchCell::wall_seconds}}) {
    CsvWriter table(out_dir / name, hash, wide);
    for (int k : kBenchElements) {
      std::vector<std::string> row{std::to_string(k)};
      for (int p : kBenchOrders) row.push_back(cell_value(report.uniform(k, p), field));
      for (double d : kBenchDeltas) row.push_back(cell_value(report.adapted(k, d), field));
      for (double d : kBenchDeltas) row.push_back(cell_value(report.adapted(k, d), &BenchCell::p_av));
      std::string line;
      for (std::size_t i = 0; i < row.size(); ++i) line += (i ? "," : "") + row[i];
      table.row(line);
    }
    table.close();
  }

  CsvWriter trade(out_dir / "tradeoff_table.csv", hash,
                  {"K", "uniform_p4", "adapt_d0.3", "adapt_d1.0", "adapt_d3.0", "best"});
  for (int k : kBenchElements) {
    auto tv = [](const BenchCell* c) { return (c && c->ok) ? fmt(c->tradeoff()) : std::string("NA"); };
    trade.row(k, tv(report.uniform(k, 4)), tv(report.adapted(k, 0.3)), tv(report.adapted(k, 1.0)),
              tv(report.adapted(k, 3.0)), report.best_tradeoff(k));
  }
  trade.close();

  CsvWriter conv(out_dir / "convergence.csv", hash, {"K", "mode", "order", "rmse", "wall_seconds"});
  for (const auto& c : report.cells) {
    if (!c.ok) continue;
    conv.row(c.elements, c.label(), c.p_av, c.rmse, c.wall_seconds);
  }
  conv.close();
  return report;
}

BenchReport cmd_bench(const fs::path& checkpoint, const Settings& s, const fs::path& out_dir) {
  return cmd_bench(policy_from_checkpoint(checkpoint), s, out_dir);
}

}  // namespace padapt
