#include "eat/baselines/greedy.hpp"

namespace eat::baselines {

core::Decision GreedyAgent::decide(const env::Environment& env) {
  core::Decision best = core::Decision::noop();
  double best_reward = env.preview_reward(best);
  const auto& cfg = env.config();
  for (int idx = 0; idx < env.visible_queue_len(); ++idx) {
    for (int steps = cfg.steps_min; steps <= cfg.steps_max; ++steps) {
      const core::Decision cand = core::Decision::schedule(idx, steps);
      const double r = env.preview_reward(cand);
      if (r > best_reward) {
        best = cand;
        best_reward = r;
      }
    }
  }
  return best;
}

}  // namespace eat::baselines
