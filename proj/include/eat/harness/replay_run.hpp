#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "eat/env/scenario.hpp"

namespace eat::harness {

struct ReplayRow {
  int task_id = 0;
  int parallelism = 0;
  double arrival = 0.0;
  double decision_time = 0.0;
  int steps = 0;
  double wait = 0.0;
  double init = 0.0;
  double exec = 0.0;
  double response = 0.0;
  double quality = 0.0;
  bool reuse = false;
  std::vector<int> server_ids;
};

struct ReplayResult {
  std::vector<ReplayRow> rows;
  double mean_response = 0.0;
  int arrived = 0;
  int unscheduled = 0;  // tasks still queued when the script ends
};

/// Executes a scripted episode and tabulates per-task timings.
ReplayResult run_replay(const env::EnvConfig& cfg, const env::Scenario& scenario);

void print_replay(std::ostream& out, const ReplayResult& r);
void write_replay_csv(const std::string& path, const ReplayResult& r);

}  // namespace eat::harness
