#pragma once

#include <cstdint>
#include <random>

#include "eat/baselines/agent.hpp"

namespace eat::baselines {

/// Draws a raw action vector uniformly from [0,1]^(l+2) and decodes it, so
/// roughly half of its decisions are deliberate idling.
class RandomAgent : public Agent {
 public:
  explicit RandomAgent(std::uint64_t seed) : g_(seed) {}

  core::Decision decide(const env::Environment& env) override;
  std::string name() const override { return "random"; }

  /// The raw vector drawn for the most recent decision.
  const core::ActionVector& last_action() const { return last_; }

 private:
  std::mt19937_64 g_;
  core::ActionVector last_;
};

}  // namespace eat::baselines
