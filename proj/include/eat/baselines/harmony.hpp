#pragma once

#include <cstdint>

#include "eat/baselines/sequence.hpp"

namespace eat::baselines {

struct HarmonyConfig {
  int memory = 64;
  int improvisations = 64;
  double consider_rate = 0.8;  // chance a scalar is copied from memory
  double pitch_rate = 0.2;     // chance a copied scalar is nudged
  double bandwidth = 0.1;      // nudge half-width, in [0,1] units
  int sequence_length = 0;     // 0: one entry per possible decision epoch
  std::uint64_t seed = 0;
  std::uint64_t episode_seed = 0;

  void validate() const;
};

/// Harmony-search over open-loop plans for one seeded episode: new plans mix
/// per-scalar draws from memory (possibly pitch-adjusted) with fresh uniform
/// values, replacing the worst stored plan whenever they beat it.
OptimizeResult optimize_harmony(const env::EnvConfig& env_cfg, const HarmonyConfig& cfg);

}  // namespace eat::baselines
