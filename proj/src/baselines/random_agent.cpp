#include "eat/baselines/random_agent.hpp"

#include "eat/core/codec.hpp"
#include "eat/core/rng.hpp"

namespace eat::baselines {

core::Decision RandomAgent::decide(const env::Environment& env) {
  const auto& cfg = env.config();
  last_.exec_gate = core::rng::uniform01(g_);
  last_.steps_fraction = core::rng::uniform01(g_);
  last_.task_prefs.resize(static_cast<std::size_t>(cfg.queue_window));
  for (auto& p : last_.task_prefs) p = core::rng::uniform01(g_);
  return core::decode_action(last_, env.visible_queue_len(), cfg.steps_min, cfg.steps_max);
}

}  // namespace eat::baselines
