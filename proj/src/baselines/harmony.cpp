#include "eat/baselines/harmony.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "eat/core/rng.hpp"

namespace eat::baselines {

void HarmonyConfig::validate() const {
  if (memory < 1) throw std::invalid_argument("memory must hold at least one plan");
  if (improvisations < 0) throw std::invalid_argument("improvisations must be non-negative");
  if (consider_rate < 0.0 || consider_rate > 1.0)
    throw std::invalid_argument("consider_rate must lie in [0, 1]");
  if (pitch_rate < 0.0 || pitch_rate > 1.0)
    throw std::invalid_argument("pitch_rate must lie in [0, 1]");
  if (bandwidth < 0.0) throw std::invalid_argument("bandwidth must be non-negative");
  if (sequence_length < 0) throw std::invalid_argument("sequence_length must be non-negative");
}

OptimizeResult optimize_harmony(const env::EnvConfig& env_cfg, const HarmonyConfig& cfg) {
  cfg.validate();
  env_cfg.validate();
  const int length = cfg.sequence_length > 0 ? cfg.sequence_length : env_cfg.decision_limit;
  const std::size_t genome_len =
      static_cast<std::size_t>(length) * static_cast<std::size_t>(env_cfg.queue_window + 2);
  std::mt19937_64 g(cfg.seed);

  const auto fitness = [&](const std::vector<double>& genome) {
    return episode_reward(env_cfg, ActionSequence::unflatten(genome, env_cfg.queue_window),
                          cfg.episode_seed);
  };
  const auto pick = [&](std::size_t n) {
    return std::min(static_cast<std::size_t>(core::rng::uniform01(g) * static_cast<double>(n)),
                    n - 1);
  };

  std::vector<std::vector<double>> memory(static_cast<std::size_t>(cfg.memory),
                                          std::vector<double>(genome_len));
  for (auto& genome : memory)
    for (auto& v : genome) v = core::rng::uniform01(g);
  std::vector<double> fit(memory.size());
  for (std::size_t i = 0; i < memory.size(); ++i) fit[i] = fitness(memory[i]);

  OptimizeResult result;
  result.best_reward = -std::numeric_limits<double>::infinity();
  const auto record_best = [&]() {
    const auto it = std::max_element(fit.begin(), fit.end());
    if (*it > result.best_reward) {
      result.best_reward = *it;
      result.best = ActionSequence::unflatten(memory[static_cast<std::size_t>(it - fit.begin())],
                                              env_cfg.queue_window);
    }
    result.history.push_back(result.best_reward);
  };
  record_best();

  for (int round = 0; round < cfg.improvisations; ++round) {
    std::vector<double> cand(genome_len);
    for (std::size_t j = 0; j < genome_len; ++j) {
      if (core::rng::uniform01(g) < cfg.consider_rate) {
        double v = memory[pick(memory.size())][j];
        if (core::rng::uniform01(g) < cfg.pitch_rate)
          v = std::clamp(v + cfg.bandwidth * core::rng::uniform(g, -1.0, 1.0), 0.0, 1.0);
        cand[j] = v;
      } else {
        cand[j] = core::rng::uniform01(g);
      }
    }
    const double f = fitness(cand);
    const auto worst = static_cast<std::size_t>(
        std::min_element(fit.begin(), fit.end()) - fit.begin());
    if (f > fit[worst]) {
      memory[worst] = std::move(cand);
      fit[worst] = f;
    }
    record_best();
  }
  return result;
}

}  // namespace eat::baselines
