#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "eat/env/environment.hpp"

namespace eat::env {

/// One scripted decision. Overrides let a scenario pin init or exec durations
/// measured on real hardware when they differ from the cost model.
struct ScriptedDecision {
  double time = 0.0;
  bool noop = false;
  int task_id = 0;
  int steps = 0;
  std::vector<int> server_ids;
  std::optional<double> init_override;
  std::optional<double> exec_override;
  int line = 0;  // source line, for error reporting
};

/// Line-oriented episode script:
///   arrival <t> <parallelism>
///   decide <t> <task_id> <steps> <server_id...> [init=<sec>] [exec=<sec>]
///   noop <t>
/// '#' starts a comment. Times must be non-decreasing per record kind.
struct Scenario {
  std::vector<Arrival> arrivals;
  std::vector<ScriptedDecision> decisions;
};

Scenario parse_scenario(std::istream& in);
Scenario load_scenario(const std::string& path);

}  // namespace eat::env
