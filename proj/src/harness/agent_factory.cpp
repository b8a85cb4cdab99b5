#include "eat/harness/agent_factory.hpp"

#include <stdexcept>
#include <utility>

#include "eat/baselines/greedy.hpp"
#include "eat/baselines/random_agent.hpp"
#include "eat/baselines/sequence.hpp"
#include "eat/core/codec.hpp"
#include "eat/nn/checkpoint.hpp"

namespace eat::harness {

PolicyAgent::PolicyAgent(const policy::ActorConfig& cfg, std::uint64_t weight_seed,
                         std::string name)
    : actor_([&] {
        std::mt19937_64 wg(weight_seed);
        return policy::Actor(cfg, wg);
      }()),
      name_(std::move(name)) {}

core::Decision PolicyAgent::decide(const env::Environment& env) {
  last_ = actor_.act(env.observe(), g_);
  const auto& cfg = env.config();
  return core::decode_action(last_, env.visible_queue_len(), cfg.steps_min, cfg.steps_max);
}

bool is_policy_agent(const std::string& agent) {
  return agent == "eat" || agent == "eat-a" || agent == "eat-d" || agent == "eat-da";
}

policy::ActorConfig ablated_actor_config(policy::ActorConfig base, const std::string& agent) {
  if (!is_policy_agent(agent))
    throw std::invalid_argument("not a policy agent: '" + agent + "'");
  base.use_attention = agent == "eat" || agent == "eat-d";
  base.use_diffusion = agent == "eat" || agent == "eat-a";
  return base;
}

namespace {

/// Non-owning episode view of a long-lived agent.
class SharedAgent : public baselines::Agent {
 public:
  explicit SharedAgent(std::shared_ptr<baselines::Agent> inner) : inner_(std::move(inner)) {}
  core::Decision decide(const env::Environment& env) override { return inner_->decide(env); }
  std::string name() const override { return inner_->name(); }

 private:
  std::shared_ptr<baselines::Agent> inner_;
};

constexpr std::uint64_t kSeedMix = 0x9e3779b97f4a7c15ULL;  // decorrelates agent and arrival draws

}  // namespace

AgentFactory make_agent_factory(const RunConfig& cfg, const std::string& checkpoint,
                                const std::string& sequence) {
  const std::string agent = cfg.agent;
  if (is_policy_agent(agent)) {
    auto shared = std::make_shared<PolicyAgent>(ablated_actor_config(cfg.actor, agent),
                                                cfg.train.seed, agent);
    if (!checkpoint.empty()) {
      nn::NamedParams params;
      shared->actor().collect(params);
      nn::restore(nn::Checkpoint::load_file(checkpoint), params);
    }
    return [shared](std::uint64_t seed) -> std::unique_ptr<baselines::Agent> {
      shared->reseed(seed ^ kSeedMix);
      return std::make_unique<SharedAgent>(shared);
    };
  }
  if (agent == "greedy") {
    return [](std::uint64_t) { return std::make_unique<baselines::GreedyAgent>(); };
  }
  if (agent == "random") {
    return [](std::uint64_t seed) {
      return std::make_unique<baselines::RandomAgent>(seed ^ kSeedMix);
    };
  }
  if (agent == "genetic" || agent == "harmony") {
    if (!sequence.empty()) {
      auto plan = baselines::ActionSequence::load_file(sequence);
      return [plan, agent](std::uint64_t) {
        return std::make_unique<baselines::SequenceAgent>(plan, agent);
      };
    }
    if (agent == "genetic") {
      return [cfg](std::uint64_t seed) {
        baselines::GeneticConfig gc = cfg.genetic;
        gc.episode_seed = seed;
        gc.seed = cfg.genetic.seed ^ (seed * kSeedMix);
        return std::make_unique<baselines::SequenceAgent>(
            baselines::optimize_genetic(cfg.env, gc).best, "genetic");
      };
    }
    return [cfg](std::uint64_t seed) {
      baselines::HarmonyConfig hc = cfg.harmony;
      hc.episode_seed = seed;
      hc.seed = cfg.harmony.seed ^ (seed * kSeedMix);
      return std::make_unique<baselines::SequenceAgent>(
          baselines::optimize_harmony(cfg.env, hc).best, "harmony");
    };
  }
  throw std::invalid_argument("unknown agent '" + agent +
                              "' (expected eat, eat-a, eat-d, eat-da, greedy, random, genetic or "
                              "harmony)");
}

}  // namespace eat::harness
