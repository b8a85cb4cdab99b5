#pragma once

#include <cstdint>

#include "eat/baselines/sequence.hpp"

namespace eat::baselines {

struct GeneticConfig {
  int population = 64;
  int generations = 32;
  int parents = 10;         // pool size picked each generation
  int tournament = 3;       // contestants per pool slot
  double mutation_rate = 0.1;
  int elites = 1;
  int sequence_length = 0;  // 0: one entry per possible decision epoch
  std::uint64_t seed = 0;          // optimizer randomness
  std::uint64_t episode_seed = 0;  // the scenario being optimized

  void validate() const;
};

/// Evolves an open-loop plan for one seeded episode: tournament-selected
/// parent pool, single-point crossover at scalar granularity, uniform
/// resampling mutation, and elitism.
OptimizeResult optimize_genetic(const env::EnvConfig& env_cfg, const GeneticConfig& cfg);

}  // namespace eat::baselines
