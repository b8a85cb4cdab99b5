#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>

#include "eat/env/environment.hpp"
#include "eat/nn/adam.hpp"
#include "eat/policy/actor.hpp"
#include "eat/trainer/critic.hpp"
#include "eat/trainer/replay_buffer.hpp"

namespace eat::trainer {

struct TrainConfig {
  int episodes = 300;
  int updates_per_episode = 1;
  int batch_size = 512;
  std::size_t buffer_capacity = 1'000'000;
  double gamma = 0.95;
  double tau = 0.005;             // target blend rate
  double entropy_weight = 0.05;   // bonus in the actor objective only
  nn::AdamConfig actor_opt{3e-4, 0.9, 0.999, 1e-8, 1e-4};
  nn::AdamConfig critic_opt{3e-4, 0.9, 0.999, 1e-8, 1e-4};
  std::uint64_t seed = 1;

  void validate() const;
};

struct EpisodeResult {
  std::uint64_t seed = 0;
  double total_reward = 0.0;
  int decisions = 0;
  int scheduled = 0;
  int completed = 0;
  double mean_latency = 0.0;  // response time over scheduled tasks
  double mean_quality = 0.0;
};

struct UpdateStats {
  double critic_loss = 0.0;      // summed MSE of both live critics
  double actor_objective = 0.0;  // mean(min Q + entropy bonus), maximised
  double mean_entropy = 0.0;
};

/// Off-policy actor-critic trainer: serial episode rollouts feed a replay
/// buffer; each optimisation round does one clipped-double-Q regression, one
/// reparameterised actor ascent step and a soft target blend.
class SacTrainer {
 public:
  using CriticFn = std::function<nn::Node*(nn::Graph&, nn::Node* states, nn::Node* actions)>;

  SacTrainer(const env::EnvConfig& env_cfg, const policy::ActorConfig& actor_cfg,
             const CriticConfig& critic_cfg, const TrainConfig& cfg);

  /// Plays one full episode with the stochastic policy and stores every
  /// transition.
  EpisodeResult rollout(std::uint64_t seed);

  /// One optimisation round on a uniform batch; empty while the buffer is
  /// smaller than the batch size.
  std::optional<UpdateStats> update();

  double critic_update(std::span<const core::Experience* const> batch);

  /// Ascends mean(critic_fn(s, a(s)) + entropy_weight * H). The critic is
  /// injectable so the ascent can be tested against an analytic objective.
  double actor_update(std::span<const core::SystemState* const> states, const CriticFn& critic_fn,
                      double* mean_entropy = nullptr);

  policy::Actor& actor() { return actor_; }
  TwinCritics& critics() { return critics_; }
  ReplayBuffer& buffer() { return buffer_; }
  std::mt19937_64& rng() { return g_; }
  const TrainConfig& config() const { return cfg_; }
  const env::EnvConfig& env_config() const { return env_cfg_; }

  /// Actor, live critics and target critics, for checkpoints.
  nn::NamedParams named_params();

 private:
  env::EnvConfig env_cfg_;
  TrainConfig cfg_;
  std::mt19937_64 g_;
  policy::Actor actor_;
  TwinCritics critics_;
  ReplayBuffer buffer_;
  nn::Adam actor_opt_;
  nn::Adam critic_opt_;
};

}  // namespace eat::trainer
