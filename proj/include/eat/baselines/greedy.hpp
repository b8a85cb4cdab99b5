#pragma once

#include "eat/baselines/agent.hpp"

namespace eat::baselines {

/// Exhaustive one-step lookahead: previews doing nothing plus every
/// (visible task, step count) pair and takes the highest immediate reward.
/// Ties keep the earliest candidate in that enumeration order.
class GreedyAgent : public Agent {
 public:
  core::Decision decide(const env::Environment& env) override;
  std::string name() const override { return "greedy"; }
};

}  // namespace eat::baselines
