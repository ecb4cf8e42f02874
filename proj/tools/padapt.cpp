// Command-line front end: train, test, simulate, adapt, bench.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include "padapt/analytic.hpp"
#include "padapt/bench.hpp"

namespace {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericError = 3, kIoError = 4 };

// Flags that map one-to-one onto Settings keys. Values are kept as text and
// applied after the config file so the command line wins.
struct Overrides {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    options[key] = app->add_option(flag, values[key], help);
  }
  void apply(padapt::Settings& s) const {
    for (const auto& [key, opt] : options) {
      if (opt->count() > 0) s.set(key, values.at(key));
    }
  }
};

struct Common {
  std::string config;
  std::string out = "out";
  Overrides overrides;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "flat key = value settings file");
  app->add_option("--out", c.out, "output directory")->capture_default_str();
  c.overrides.add(app, "--seed", "seed", "random seed");
}

padapt::Settings resolve(const Common& c) {
  padapt::Settings s;
  if (!c.config.empty()) s = padapt::load_config_file(c.config, s);
  c.overrides.apply(s);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reinforcement-learning p-adaptation for a 1D DGSEM Burgers solver"};
  app.require_subcommand(1);
  app.set_version_flag("--version", padapt::kToolVersion);

  Common train_opts, test_opts, sim_opts, adapt_opts, bench_opts;
  std::string test_ckpt, adapt_ckpt, bench_ckpt;

  auto* train = app.add_subcommand("train", "train the PPO agent on random sinusoids");
  add_common(train, train_opts);
  train_opts.overrides.add(train, "--episodes", "episodes", "number of training episodes");
  train_opts.overrides.add(train, "--steps", "steps_per_episode", "agent steps per episode");

  auto* test = app.add_subcommand("test", "greedy test sets against the brute-force optimal order");
  add_common(test, test_opts);
  test->add_option("--checkpoint", test_ckpt, "trained agent")->required();
  test_opts.overrides.add(test, "--n-sets", "n_sets", "number of test sets");
  test_opts.overrides.add(test, "--set-size", "set_size", "random functions per set");

  auto* sim = app.add_subcommand("simulate", "uniform-order Burgers run");
  add_common(sim, sim_opts);
  sim_opts.overrides.add(sim, "-K,--elements", "elements", "number of elements");
  sim_opts.overrides.add(sim, "-p,--order", "order", "polynomial order");
  sim_opts.overrides.add(sim, "--t-end", "t_end", "final time");
  sim_opts.overrides.add(sim, "--dt", "dt", "time step");

  auto* adapt = app.add_subcommand("adapt", "Burgers run with agent-driven p-adaptation");
  add_common(adapt, adapt_opts);
  adapt->add_option("--checkpoint", adapt_ckpt, "trained agent")->required();
  adapt_opts.overrides.add(adapt, "-K,--elements", "elements", "number of elements");
  adapt_opts.overrides.add(adapt, "-p,--order", "order", "starting polynomial order");
  adapt_opts.overrides.add(adapt, "--delta", "delta", "error scaling control parameter");
  adapt_opts.overrides.add(adapt, "--t-end", "t_end", "final time");
  adapt_opts.overrides.add(adapt, "--dt", "dt", "time step");

  auto* bench = app.add_subcommand("bench", "error, time and trade-off tables");
  add_common(bench, bench_opts);
  bench->add_option("--checkpoint", bench_ckpt, "trained agent")->required();
  bench_opts.overrides.add(bench, "--repeats", "timing_repeats", "timed repetitions per cell");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    if (*train) {
      const auto s = resolve(train_opts);
      const auto out = padapt::cmd_train(s, train_opts.out);
      double tail = 0.0;
      const std::size_t n = std::min<std::size_t>(out.log.size(), 1000);
      for (std::size_t i = out.log.size() - n; i < out.log.size(); ++i) tail += out.log[i].mean_reward;
      std::printf("trained %d episodes (seed %llu) -> %s\n", s.episodes.num_episodes,
                  static_cast<unsigned long long>(s.seed), out.checkpoint_path.string().c_str());
      if (n > 0) std::printf("mean episode reward over last %zu episodes: %.4f\n", n, tail / n);
    } else if (*test) {
      const auto s = resolve(test_opts);
      const auto report = padapt::cmd_test(test_ckpt, s, test_opts.out);
      std::printf("%-6s %-16s %-18s %s\n", "set", "reward_accuracy", "mean|p-p_opt|", "exact");
      for (const auto& t : report.sets) {
        std::printf("%-6d %-16.3f %-18.2f %.2f\n", t.set_id + 1, t.reward_accuracy, t.mean_abs_error,
                    t.exact_fraction);
      }
      std::printf("overall exact fraction: %.3f\n", report.exact_fraction);
    } else if (*sim) {
      const auto s = resolve(sim_opts);
      const auto out = padapt::cmd_simulate(s, sim_opts.out);
      std::printf("K=%d p=%d t=%.4f rmse=%.4e wall=%.4fs\n", s.elements, s.order, out.mesh.time, out.rmse,
                  out.wall_seconds);
    } else if (*adapt) {
      const auto s = resolve(adapt_opts);
      const auto run = padapt::cmd_adapt(adapt_ckpt, s, adapt_opts.out);
      std::printf("K=%d p0=%d delta=%.2f rmse=%.4e p_av=%.3f wall=%.4fs\n", s.elements, s.order, s.adapt.delta,
                  run.metrics.rmse, run.metrics.p_av, run.metrics.wall_seconds);
    } else if (*bench) {
      const auto s = resolve(bench_opts);
      const auto report = padapt::cmd_bench(bench_ckpt, s, bench_opts.out);
      int failures = 0;
      for (const auto& c : report.cells) {
        if (!c.ok) {
          ++failures;
          std::fprintf(stderr, "failed: K=%d %s: %s\n", c.elements, c.label().c_str(), c.error.c_str());
        } else {
          std::printf("K=%-3d %-12s rmse=%.3e p_av=%.2f wall=%.4fs\n", c.elements, c.label().c_str(), c.rmse,
                      c.p_av, c.wall_seconds);
        }
      }
      for (int k : padapt::kBenchElements) std::printf("best trade-off K=%d: %s\n", k, report.best_tradeoff(k).c_str());
      if (failures > 0) return kNumericError;
    }
  } catch (const padapt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const padapt::CheckpointError& e) {
    std::cerr << "checkpoint error: " << e.what() << "\n";
    return kIoError;
  } catch (const padapt::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const padapt::SolverInstability& e) {
    std::cerr << "numeric failure: " << e.what() << " (last stable time " << e.last_stable_time() << ")\n";
    return kNumericError;
  } catch (const padapt::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumericError;
  } catch (const padapt::AnalyticError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumericError;
  }
  return kOk;
}
