#pragma once

#include <string>

#include "eat/harness/metrics.hpp"

namespace eat::harness {

struct LatencyStats {
  int decisions = 0;
  double mean_us = 0.0;
  double p50_us = 0.0;
  double p95_us = 0.0;
  double max_us = 0.0;
};

/// Wall-clock cost of agent.decide, measured across live episodes (seeded
/// like eval) whose state evolves under the agent's own decisions.
LatencyStats measure_decision_latency(const RunConfig& cfg, const AgentFactory& make,
                                      int decisions);

void write_latency_csv(const std::string& path, const std::string& agent,
                       const LatencyStats& s);

}  // namespace eat::harness
