// Command-line front end: train, eval, replay, optimize, bench, config.
// Every run snapshots its effective settings next to its outputs so results
// can be reproduced from the artifacts alone.

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "eat/baselines/genetic.hpp"
#include "eat/baselines/harmony.hpp"
#include "eat/env/scenario.hpp"
#include "eat/harness/agent_factory.hpp"
#include "eat/harness/bench.hpp"
#include "eat/harness/config.hpp"
#include "eat/harness/metrics.hpp"
#include "eat/harness/replay_run.hpp"
#include "eat/harness/run_dir.hpp"
#include "eat/nn/checkpoint.hpp"
#include "eat/trainer/sac.hpp"

namespace {

using namespace eat;

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> sets;
  std::string agent;
  std::string out;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "config file of key=value lines");
  cmd->add_option("--set", opts.sets, "override one setting, e.g. --set env.cluster_size=8")
      ->type_name("KEY=VALUE");
  cmd->add_option("--agent", opts.agent,
                  "agent name (eat, eat-a, eat-d, eat-da, greedy, random, genetic, harmony)");
  cmd->add_option("--out", opts.out, "output directory (default: runs/<verb>-<timestamp>)");
  cmd->add_flag("--quiet", opts.quiet, "suppress progress lines");
}

harness::RunConfig build_config(const CommonOpts& opts) {
  harness::RunConfig cfg = opts.config_path.empty()
                               ? harness::RunConfig{}
                               : harness::load_config_file(opts.config_path);
  for (const auto& line : opts.sets) harness::apply_setting_line(cfg, line);
  if (!opts.agent.empty()) harness::apply_setting(cfg, "agent", opts.agent);
  cfg.sync_shapes();
  cfg.validate();
  return cfg;
}

int run_train(const CommonOpts& opts) {
  const harness::RunConfig cfg = build_config(opts);
  if (!harness::is_policy_agent(cfg.agent))
    throw std::invalid_argument("train expects a policy agent, got '" + cfg.agent + "'");

  trainer::SacTrainer tr(cfg.env, harness::ablated_actor_config(cfg.actor, cfg.agent), cfg.critic,
                         cfg.train);
  const harness::RunDir dir = harness::RunDir::create(opts.out, "train");
  harness::save_config_file(cfg, dir.file("config.txt"));

  std::mt19937_64 seed_gen(cfg.train.seed);
  std::vector<std::vector<std::string>> curves;
  std::vector<std::vector<std::string>> timing;
  using clock = std::chrono::steady_clock;

  for (int ep = 1; ep <= cfg.train.episodes; ++ep) {
    const auto t0 = clock::now();
    const std::uint64_t seed = seed_gen();
    const trainer::EpisodeResult roll = tr.rollout(seed);
    trainer::UpdateStats last{};
    int updates = 0;
    for (int u = 0; u < cfg.train.updates_per_episode; ++u) {
      if (const auto st = tr.update()) {
        last = *st;
        ++updates;
      }
    }
    const auto t1 = clock::now();

    curves.push_back({harness::format_int(ep), std::to_string(seed),
                      harness::format_double(roll.total_reward),
                      harness::format_int(roll.decisions), harness::format_int(roll.scheduled),
                      harness::format_int(roll.completed),
                      harness::format_double(roll.mean_latency),
                      harness::format_double(roll.mean_quality), harness::format_int(updates),
                      harness::format_double(last.critic_loss),
                      harness::format_double(last.actor_objective),
                      harness::format_double(last.mean_entropy),
                      harness::format_int(static_cast<long long>(tr.buffer().size()))});
    const double wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    timing.push_back({harness::format_int(ep), harness::format_double(wall_ms)});

    if (!opts.quiet) {
      std::cout << "episode " << ep << "/" << cfg.train.episodes
                << " reward=" << harness::format_double(roll.total_reward)
                << " latency=" << harness::format_double(roll.mean_latency)
                << " quality=" << harness::format_double(roll.mean_quality);
      if (updates > 0)
        std::cout << " critic_loss=" << harness::format_double(last.critic_loss)
                  << " actor_obj=" << harness::format_double(last.actor_objective);
      std::cout << '\n';
    }
  }

  harness::write_csv(dir.file("curves.csv"),
                     {"episode", "seed", "reward", "decisions", "scheduled", "completed",
                      "mean_latency", "mean_quality", "updates", "critic_loss", "actor_objective",
                      "entropy", "buffer_size"},
                     curves);
  harness::write_csv(dir.file("timing.csv"), {"episode", "wall_ms"}, timing);
  nn::snapshot(tr.named_params()).save_file(dir.file("policy.ckpt"));
  if (!opts.quiet) std::cout << "wrote " << dir.path << '\n';
  return 0;
}

int run_eval(const CommonOpts& opts, const std::string& checkpoint, const std::string& sequence) {
  const harness::RunConfig cfg = build_config(opts);
  const harness::AgentFactory make = harness::make_agent_factory(cfg, checkpoint, sequence);
  const harness::RunDir dir = harness::RunDir::create(opts.out, "eval");
  harness::save_config_file(cfg, dir.file("config.txt"));

  std::ofstream trace_out(dir.file("trace.jsonl"), std::ios::binary);
  if (!trace_out) throw std::runtime_error("cannot open trace file in " + dir.path);
  harness::JsonlTraceWriter trace(trace_out);

  const harness::EvalResult result = harness::run_eval(cfg, make, &trace);
  harness::write_episodes_csv(dir.file("episodes.csv"), result.episodes);
  harness::write_metrics_csv(dir.file("metrics.csv"), result.metrics);

  const auto& m = result.metrics;
  std::cout << "agent=" << cfg.agent << " episodes=" << m.episodes
            << " mean_reward=" << harness::format_double(m.mean_episode_reward)
            << " mean_latency=" << harness::format_double(m.mean_latency)
            << " mean_quality=" << harness::format_double(m.mean_quality)
            << " qos_violation_rate=" << harness::format_double(m.qos_violation_rate)
            << " reload_rate=" << harness::format_double(m.reload_rate)
            << " efficiency=" << harness::format_double(m.efficiency) << '\n';
  if (!opts.quiet) std::cout << "wrote " << dir.path << '\n';
  return 0;
}

int run_replay(const CommonOpts& opts, const std::string& scenario_path) {
  const harness::RunConfig cfg = build_config(opts);
  const env::Scenario scenario = env::load_scenario(scenario_path);
  const harness::ReplayResult result = harness::run_replay(cfg.env, scenario);
  harness::print_replay(std::cout, result);
  const harness::RunDir dir = harness::RunDir::create(opts.out, "replay");
  harness::save_config_file(cfg, dir.file("config.txt"));
  harness::write_replay_csv(dir.file("tasks.csv"), result);
  if (!opts.quiet) std::cout << "wrote " << dir.path << '\n';
  return 0;
}

int run_optimize(const CommonOpts& opts) {
  const harness::RunConfig cfg = build_config(opts);
  baselines::OptimizeResult result;
  if (cfg.agent == "genetic") {
    result = baselines::optimize_genetic(cfg.env, cfg.genetic);
  } else if (cfg.agent == "harmony") {
    result = baselines::optimize_harmony(cfg.env, cfg.harmony);
  } else {
    throw std::invalid_argument("optimize expects agent=genetic or agent=harmony, got '" +
                                cfg.agent + "'");
  }

  const harness::RunDir dir = harness::RunDir::create(opts.out, "optimize");
  harness::save_config_file(cfg, dir.file("config.txt"));
  std::vector<std::vector<std::string>> rows;
  rows.reserve(result.history.size());
  for (std::size_t i = 0; i < result.history.size(); ++i)
    rows.push_back({harness::format_int(static_cast<long long>(i)),
                    harness::format_double(result.history[i])});
  harness::write_csv(dir.file("history.csv"), {"round", "best_reward"}, rows);
  result.best.save_file(dir.file("sequence.json"));
  std::cout << "agent=" << cfg.agent
            << " best_episode_reward=" << harness::format_double(result.best_reward) << '\n';
  if (!opts.quiet) std::cout << "wrote " << dir.path << '\n';
  return 0;
}

int run_bench(const CommonOpts& opts, const std::string& checkpoint, int decisions_override) {
  const harness::RunConfig cfg = build_config(opts);
  const int decisions = decisions_override > 0 ? decisions_override : cfg.bench_decisions;
  const harness::AgentFactory make = harness::make_agent_factory(cfg, checkpoint);
  const harness::LatencyStats st = harness::measure_decision_latency(cfg, make, decisions);
  std::cout << "agent=" << cfg.agent << " decisions=" << st.decisions
            << " mean_us=" << harness::format_double(st.mean_us)
            << " p50_us=" << harness::format_double(st.p50_us)
            << " p95_us=" << harness::format_double(st.p95_us)
            << " max_us=" << harness::format_double(st.max_us) << '\n';
  const harness::RunDir dir = harness::RunDir::create(opts.out, "bench");
  harness::save_config_file(cfg, dir.file("config.txt"));
  harness::write_latency_csv(dir.file("latency.csv"), cfg.agent, st);
  if (!opts.quiet) std::cout << "wrote " << dir.path << '\n';
  return 0;
}

int run_config(const CommonOpts& opts) {
  const harness::RunConfig cfg = build_config(opts);
  for (const auto& [key, value] : harness::dump_settings(cfg))
    std::cout << key << '=' << value << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"edge-cluster scheduling simulator and policy harness"};
  app.require_subcommand(1);

  CommonOpts train_opts, eval_opts, replay_opts, optimize_opts, bench_opts, config_opts;
  std::string eval_checkpoint, eval_sequence, bench_checkpoint, scenario_path;
  int bench_decisions = 0;

  CLI::App* train_cmd = app.add_subcommand("train", "train a policy agent");
  add_common(train_cmd, train_opts);

  CLI::App* eval_cmd = app.add_subcommand("eval", "run seeded evaluation episodes");
  add_common(eval_cmd, eval_opts);
  eval_cmd->add_option("--checkpoint", eval_checkpoint, "restore policy weights from a checkpoint");
  eval_cmd->add_option("--sequence", eval_sequence, "replay a saved plan (genetic/harmony)");

  CLI::App* replay_cmd = app.add_subcommand("replay", "execute a scripted scenario");
  add_common(replay_cmd, replay_opts);
  replay_cmd->add_option("--scenario", scenario_path, "scenario script")->required();

  CLI::App* optimize_cmd = app.add_subcommand("optimize", "search for an open-loop plan");
  add_common(optimize_cmd, optimize_opts);

  CLI::App* bench_cmd = app.add_subcommand("bench", "time per-decision agent latency");
  add_common(bench_cmd, bench_opts);
  bench_cmd->add_option("--checkpoint", bench_checkpoint, "restore policy weights");
  bench_cmd->add_option("--decisions", bench_decisions, "decisions to time");

  CLI::App* config_cmd = app.add_subcommand("config", "print the effective settings");
  add_common(config_cmd, config_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_cmd->parsed()) return run_train(train_opts);
    if (eval_cmd->parsed()) return run_eval(eval_opts, eval_checkpoint, eval_sequence);
    if (replay_cmd->parsed()) return run_replay(replay_opts, scenario_path);
    if (optimize_cmd->parsed()) return run_optimize(optimize_opts);
    if (bench_cmd->parsed()) return run_bench(bench_opts, bench_checkpoint, bench_decisions);
    if (config_cmd->parsed()) return run_config(config_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
