#include "eat/harness/replay_run.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "eat/harness/config.hpp"
#include "eat/harness/run_dir.hpp"

namespace eat::harness {

ReplayResult run_replay(const env::EnvConfig& cfg, const env::Scenario& scenario) {
  env::Environment env(cfg);
  env.reset(scenario.arrivals);
  for (const auto& d : scenario.decisions) {
    env.advance_to(d.time);
    if (d.noop) continue;
    try {
      env.apply_scripted(d.task_id, d.steps, d.server_ids, d.init_override, d.exec_override);
    } catch (const std::exception& e) {
      throw std::runtime_error("scenario line " + std::to_string(d.line) + ": " + e.what());
    }
  }
  // Deliver any arrivals after the last decision so leftovers are counted.
  double horizon = env.now();
  for (const auto& a : scenario.arrivals) horizon = std::max(horizon, a.time);
  env.advance_to(horizon);

  ReplayResult res;
  res.arrived = env.arrived_count();
  res.unscheduled = static_cast<int>(env.queue().size());
  double total_response = 0.0;
  for (const auto& info : env.schedule_log()) {
    ReplayRow row;
    row.task_id = info.task_id;
    const auto idx = static_cast<std::size_t>(info.task_id - 1);
    row.parallelism = scenario.arrivals.at(idx).parallelism;
    row.arrival = scenario.arrivals.at(idx).time;
    row.decision_time = info.decision_time;
    row.steps = info.steps;
    row.wait = info.wait;
    row.init = info.init;
    row.exec = info.exec;
    row.response = info.response();
    row.quality = info.quality;
    row.reuse = info.reuse;
    row.server_ids = info.server_ids;
    total_response += row.response;
    res.rows.push_back(std::move(row));
  }
  if (!res.rows.empty()) res.mean_response = total_response / static_cast<double>(res.rows.size());
  return res;
}

namespace {

std::string join_ids(const std::vector<int>& ids, char sep) {
  std::string out;
  for (int id : ids) {
    if (!out.empty()) out += sep;
    out += std::to_string(id);
  }
  return out;
}

}  // namespace

void print_replay(std::ostream& out, const ReplayResult& r) {
  out << std::left << std::setw(6) << "task" << std::setw(7) << "split" << std::right
      << std::setw(9) << "arrival" << std::setw(10) << "decided" << std::setw(7) << "steps"
      << std::setw(9) << "wait" << std::setw(8) << "init" << std::setw(8) << "exec"
      << std::setw(10) << "response" << std::setw(9) << "quality" << std::setw(7) << "reuse"
      << "  servers\n";
  out << std::fixed << std::setprecision(2);
  for (const auto& row : r.rows) {
    out << std::left << std::setw(6) << row.task_id << std::setw(7) << row.parallelism
        << std::right << std::setw(9) << row.arrival << std::setw(10) << row.decision_time
        << std::setw(7) << row.steps << std::setw(9) << row.wait << std::setw(8) << row.init
        << std::setw(8) << row.exec << std::setw(10) << row.response << std::setw(9)
        << row.quality << std::setw(7) << (row.reuse ? "yes" : "no") << "  "
        << join_ids(row.server_ids, ',') << '\n';
  }
  out << "mean response: " << r.mean_response << "  (scheduled " << r.rows.size() << "/"
      << r.arrived;
  if (r.unscheduled > 0) out << ", " << r.unscheduled << " left queued";
  out << ")\n";
  out.unsetf(std::ios::floatfield);
}

void write_replay_csv(const std::string& path, const ReplayResult& r) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(r.rows.size());
  for (const auto& row : r.rows) {
    rows.push_back({format_int(row.task_id), format_int(row.parallelism),
                    format_double(row.arrival), format_double(row.decision_time),
                    format_int(row.steps), format_double(row.wait), format_double(row.init),
                    format_double(row.exec), format_double(row.response),
                    format_double(row.quality), row.reuse ? "true" : "false",
                    join_ids(row.server_ids, ';')});
  }
  write_csv(path,
            {"task_id", "parallelism", "arrival", "decision_time", "steps", "wait", "init",
             "exec", "response", "quality", "reuse", "servers"},
            rows);
}

}  // namespace eat::harness
