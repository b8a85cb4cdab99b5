#pragma once

#include <memory>
#include <random>
#include <string>

#include "eat/harness/metrics.hpp"
#include "eat/policy/actor.hpp"

namespace eat::harness {

/// Learned-policy agent: samples the actor and decodes the raw vector.
class PolicyAgent : public baselines::Agent {
 public:
  PolicyAgent(const policy::ActorConfig& cfg, std::uint64_t weight_seed, std::string name);

  core::Decision decide(const env::Environment& env) override;
  std::string name() const override { return name_; }

  void reseed(std::uint64_t seed) { g_.seed(seed); }
  policy::Actor& actor() { return actor_; }
  const core::ActionVector& last_action() const { return last_; }

 private:
  policy::Actor actor_;
  std::mt19937_64 g_{0};
  std::string name_;
  core::ActionVector last_;
};

/// True for the learned policy and its ablations.
bool is_policy_agent(const std::string& agent);

/// Maps an agent name onto the matching encoder/head ablation:
///   eat    attention + denoising chain      eat-a  dense encoder + chain
///   eat-d  attention + direct head          eat-da dense encoder + direct head
policy::ActorConfig ablated_actor_config(policy::ActorConfig base, const std::string& agent);

/// Per-episode agent factory for eval and bench.
///   - policy agents share one set of weights (seeded by train.seed, or
///     restored from `checkpoint`) and reseed their sampler per episode;
///   - genetic/harmony plan per episode, unless `sequence` pins a saved plan;
///   - greedy/random are built fresh each episode.
/// Unknown names throw std::invalid_argument.
AgentFactory make_agent_factory(const RunConfig& cfg, const std::string& checkpoint = "",
                                const std::string& sequence = "");

}  // namespace eat::harness
