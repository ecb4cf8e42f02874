#ifndef PADAPT_BENCH_HPP_
#define PADAPT_BENCH_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "padapt/adaptation.hpp"
#include "padapt/dgsem.hpp"
#include "padapt/environment.hpp"
#include "padapt/ppo.hpp"

namespace padapt {

inline constexpr const char* kToolVersion = "padapt 1.0.0";

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every tunable of every subcommand, addressable by a flat key.
struct Settings {
  std::uint64_t seed = 7;
  AgentConfig agent;
  EpisodeConfig episodes;
  RewardConfig reward;
  AdaptConfig adapt;
  int elements = 8;
  int order = 4;
  double dt = 1e-5;
  double t_end = 0.12;
  int n_sets = 10;
  int set_size = 100;
  int timing_repeats = 3;
  std::vector<double> snapshot_times = {0.0, 0.04, 0.08, 0.12};

  /// Throws ConfigError for unknown keys or unparsable values.
  void set(const std::string& key, const std::string& value);
  /// Canonical (key, value) listing in a fixed order.
  std::vector<std::pair<std::string, std::string>> entries() const;

  SolverConfig solver() const;
};

/// Flat `key = value` file; '#' starts a comment. Keys are the ones accepted
/// by Settings::set. Values override those already in base.
Settings load_config_file(const std::filesystem::path& path, Settings base = {});

struct RunManifest {
  std::string subcommand;
  Settings settings;
  std::string out_dir;
  std::string tool_version = kToolVersion;
  std::string timestamp;

  /// Hash of the subcommand and settings only, so reruns share it.
  std::string hash() const;
  void write(const std::filesystem::path& path) const;
};

RunManifest make_manifest(const std::string& subcommand, const Settings& settings,
                          const std::filesystem::path& out_dir);

/// CSV with a `# manifest: <hash>` line followed by a header row.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& manifest_hash,
            const std::vector<std::string>& header);

  template <typename... Ts>
  void row(const Ts&... values) {
    bool first = true;
    ((os_ << (first ? "" : ","), os_ << values, first = false), ...);
    os_ << '\n';
  }
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream os_;
};

// Test protocol --------------------------------------------------------------

/// Policy used for greedy rollouts; the target function is available so that
/// oracle agents can be expressed.
using RolloutPolicy = std::function<Action(const AgentObservation&, const RandomFunction&)>;

RolloutPolicy rollout_policy(const OrderPolicy& policy);
/// Moves straight toward the brute-force optimal order.
RolloutPolicy oracle_rollout_policy(const RewardConfig& cfg = {});

struct TestEpisode {
  int set_id = 0;
  int episode_id = 0;
  RandomFunction g;
  int p0 = 0;
  int p_final = 0;
  int p_opt = 0;
  double reward_final = 0.0;
  double reward_opt = 0.0;
};

struct TestSetSummary {
  int set_id = 0;
  double reward_accuracy = 0.0;  // mean(reward_final) / mean(reward_opt)
  double mean_abs_error = 0.0;   // mean |p_final - p_opt|
  double exact_fraction = 0.0;   // share of rollouts ending at p_opt
};

struct TestReport {
  std::vector<TestEpisode> episodes;
  std::vector<TestSetSummary> sets;
  std::array<int, kMaxOrder - kMinOrder + 1> histogram{};  // counts of |p_final - p_opt|
  double exact_fraction = 0.0;
};

TestReport evaluate_test_sets(const RolloutPolicy& policy, int n_sets, int set_size, int steps,
                              Rng rng, const RewardConfig& cfg = {});

// Subcommands -----------------------------------------------------------------

struct TrainOutcome {
  Checkpoint checkpoint;
  std::vector<TrainingLogRow> log;
  std::filesystem::path checkpoint_path;
};

TrainOutcome cmd_train(const Settings& s, const std::filesystem::path& out_dir);

TestReport cmd_test(const std::filesystem::path& checkpoint, const Settings& s,
                    const std::filesystem::path& out_dir);
TestReport cmd_test(const RolloutPolicy& policy, const Settings& s, const std::filesystem::path& out_dir);

struct SimulateOutcome {
  MeshState mesh;
  double rmse = 0.0;
  double wall_seconds = 0.0;
};

SimulateOutcome cmd_simulate(const Settings& s, const std::filesystem::path& out_dir);

AdaptedRun cmd_adapt(const std::filesystem::path& checkpoint, const Settings& s,
                     const std::filesystem::path& out_dir);
AdaptedRun cmd_adapt(const OrderPolicy& policy, const Settings& s, const std::filesystem::path& out_dir);

struct BenchCell {
  int elements = 0;
  bool adapted = false;
  int order = 0;       // uniform order, or the starting order for adapted runs
  double delta = 0.0;  // adapted runs only
  double rmse = 0.0;
  double p_av = 0.0;
  double wall_seconds = 0.0;
  bool ok = true;
  std::string error;

  double tradeoff() const { return wall_seconds * rmse; }
  std::string label() const;
};

struct BenchReport {
  std::vector<BenchCell> cells;

  const BenchCell* uniform(int elements, int order) const;
  const BenchCell* adapted(int elements, double delta) const;
  /// Label of the smallest time x error among uniform p=4 and the adapted runs.
  std::string best_tradeoff(int elements) const;
};

inline constexpr std::array<int, 3> kBenchElements = {4, 8, 16};
inline constexpr std::array<int, 4> kBenchOrders = {3, 4, 5, 6};
inline constexpr std::array<double, 3> kBenchDeltas = {0.3, 1.0, 3.0};

BenchReport cmd_bench(const std::filesystem::path& checkpoint, const Settings& s,
                      const std::filesystem::path& out_dir);
BenchReport cmd_bench(const OrderPolicy& policy, const Settings& s, const std::filesystem::path& out_dir);

}  // namespace padapt

#endif  // PADAPT_BENCH_HPP_
