#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "eat/baselines/genetic.hpp"
#include "eat/baselines/harmony.hpp"
#include "eat/env/environment.hpp"
#include "eat/policy/actor.hpp"
#include "eat/trainer/critic.hpp"
#include "eat/trainer/sac.hpp"

namespace eat::harness {

/// One flat bag of every tunable in the system. Settings are addressed as
/// dotted `key=value` strings so a run can be described by a config file plus
/// command-line overrides, and snapshotted back out losslessly.
struct RunConfig {
  std::string agent = "eat";
  env::EnvConfig env;
  policy::ActorConfig actor;
  trainer::CriticConfig critic;
  trainer::TrainConfig train;
  baselines::GeneticConfig genetic;
  baselines::HarmonyConfig harmony;
  int eval_episodes = 20;
  std::uint64_t eval_seed = 1000;
  int bench_decisions = 1000;

  /// The policy and critic observation shapes always follow the environment.
  void sync_shapes();
  void validate() const;
};

/// Every setting as (key, value) in a stable order; values round-trip through
/// apply_setting exactly.
std::vector<std::pair<std::string, std::string>> dump_settings(const RunConfig& c);

/// Applies one setting. Unknown keys and malformed values throw
/// std::invalid_argument naming the key.
void apply_setting(RunConfig& c, const std::string& key, const std::string& value);

/// Splits "key=value" and applies it.
void apply_setting_line(RunConfig& c, const std::string& line);

/// Reads `key=value` lines ('#' starts a comment, blank lines skipped).
RunConfig load_config_file(const std::string& path);

void save_config_file(const RunConfig& c, const std::string& path);

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);
std::string format_int(long long v);

}  // namespace eat::harness
