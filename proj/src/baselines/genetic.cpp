#include "eat/baselines/genetic.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "eat/core/rng.hpp"

namespace eat::baselines {

void GeneticConfig::validate() const {
  if (population < 2) throw std::invalid_argument("population must hold at least two genomes");
  if (generations < 1) throw std::invalid_argument("generations must be positive");
  if (parents < 1 || parents > population)
    throw std::invalid_argument("parent pool must fit inside the population");
  if (tournament < 1) throw std::invalid_argument("tournament size must be positive");
  if (mutation_rate < 0.0 || mutation_rate > 1.0)
    throw std::invalid_argument("mutation_rate must lie in [0, 1]");
  if (elites < 0 || elites > population)
    throw std::invalid_argument("elite count must fit inside the population");
  if (sequence_length < 0) throw std::invalid_argument("sequence_length must be non-negative");
}

namespace {

std::size_t pick_index(std::mt19937_64& g, std::size_t n) {
  return std::min(static_cast<std::size_t>(core::rng::uniform01(g) * static_cast<double>(n)),
                  n - 1);
}

}  // namespace

OptimizeResult optimize_genetic(const env::EnvConfig& env_cfg, const GeneticConfig& cfg) {
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

  std::vector<std::vector<double>> pop(static_cast<std::size_t>(cfg.population),
                                       std::vector<double>(genome_len));
  for (auto& genome : pop)
    for (auto& v : genome) v = core::rng::uniform01(g);

  std::vector<double> fit(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) fit[i] = fitness(pop[i]);

  OptimizeResult result;
  result.best_reward = -std::numeric_limits<double>::infinity();
  const auto record_best = [&]() {
    const auto it = std::max_element(fit.begin(), fit.end());
    const auto i = static_cast<std::size_t>(it - fit.begin());
    if (*it > result.best_reward) {
      result.best_reward = *it;
      result.best = ActionSequence::unflatten(pop[i], env_cfg.queue_window);
    }
    result.history.push_back(result.best_reward);
  };
  record_best();

  for (int gen = 0; gen < cfg.generations; ++gen) {
    // Parent pool: each slot is the fittest of `tournament` uniform draws.
    std::vector<std::size_t> pool;
    pool.reserve(static_cast<std::size_t>(cfg.parents));
    for (int p = 0; p < cfg.parents; ++p) {
      std::size_t winner = pick_index(g, pop.size());
      for (int t = 1; t < cfg.tournament; ++t) {
        const std::size_t cand = pick_index(g, pop.size());
        if (fit[cand] > fit[winner]) winner = cand;
      }
      pool.push_back(winner);
    }

    std::vector<std::size_t> order(pop.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return fit[a] > fit[b]; });

    std::vector<std::vector<double>> next;
    next.reserve(pop.size());
    for (int e = 0; e < cfg.elites; ++e) next.push_back(pop[order[static_cast<std::size_t>(e)]]);
    while (next.size() < pop.size()) {
      const auto& pa = pop[pool[pick_index(g, pool.size())]];
      const auto& pb = pop[pool[pick_index(g, pool.size())]];
      const std::size_t cut = 1 + pick_index(g, genome_len - 1);
      std::vector<double> child(genome_len);
      std::copy(pa.begin(), pa.begin() + static_cast<std::ptrdiff_t>(cut), child.begin());
      std::copy(pb.begin() + static_cast<std::ptrdiff_t>(cut), pb.end(),
                child.begin() + static_cast<std::ptrdiff_t>(cut));
      for (auto& v : child)
        if (core::rng::uniform01(g) < cfg.mutation_rate) v = core::rng::uniform01(g);
      next.push_back(std::move(child));
    }

    pop = std::move(next);
    for (std::size_t i = 0; i < pop.size(); ++i) fit[i] = fitness(pop[i]);
    record_best();
  }
  return result;
}

}  // namespace eat::baselines
