#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "eat/core/types.hpp"
#include "eat/env/cluster.hpp"
#include "eat/env/quality_model.hpp"
#include "eat/env/reward.hpp"
#include "eat/env/time_model.hpp"

namespace eat::env {

struct Arrival {
  double time = 0.0;
  int parallelism = 1;
};

struct EnvConfig {
  int cluster_size = 4;
  int queue_window = 5;  // how many queued tasks a decision can see
  double arrival_rate = 0.05;
  /// Weights over patch counts {1, 2, 4, 8}. All-zero selects the default:
  /// uniform over the counts the cluster can host.
  std::array<double, 4> parallelism_weights{0, 0, 0, 0};
  int tasks_per_episode = 32;
  double time_limit = 1024.0;
  int decision_limit = 1024;
  double min_decision_interval = 1.0;
  int steps_min = 10;
  int steps_max = 50;
  TimeModel time_model;
  QualityModel quality_model;
  RewardParams reward;

  std::array<double, 4> effective_weights() const;
  void validate() const;
};

/// Everything known about a task the moment it is placed.
struct ScheduledInfo {
  int task_id = 0;
  int steps = 0;
  double decision_time = 0.0;
  double wait = 0.0;
  double init = 0.0;
  double exec = 0.0;
  double quality = 0.0;
  double reward = 0.0;
  bool reuse = false;
  std::vector<int> server_ids;

  double response() const { return wait + init + exec; }
  double completion() const { return decision_time + init + exec; }
};

struct StepOutcome {
  core::SystemState state;
  double reward = 0.0;
  bool done = false;
  bool infeasible = false;  // a schedule was requested but no placement existed
  std::optional<ScheduledInfo> scheduled;
};

struct TraceEvent {
  enum class Kind { Arrival, Schedule, NoOp, Completion, EpisodeEnd };
  Kind kind = Kind::NoOp;
  double time = 0.0;
  int task_id = -1;
  int parallelism = 0;
  int steps = 0;
  double wait = 0.0;
  double init = 0.0;
  double exec = 0.0;
  double quality = 0.0;
  double reward = 0.0;
  bool reuse = false;
  std::vector<int> server_ids;
};

class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void on_event(const TraceEvent& ev) = 0;
};

/// Event-driven cluster simulator. Decisions happen at event epochs (arrivals
/// and completions merged to at least `min_decision_interval` apart); a step
/// applies one decision and advances the clock to the next epoch. Copying the
/// object snapshots the whole episode, which is how one-step previews work.
class Environment {
 public:
  explicit Environment(EnvConfig cfg);

  /// Starts an episode with arrivals sampled from the seeded stream.
  core::SystemState reset(std::uint64_t seed);
  /// Starts an episode with a scripted arrival list (times ascending).
  core::SystemState reset(std::vector<Arrival> arrivals);

  StepOutcome step(const core::Decision& d);

  /// Reward the decision would earn right now, on a throwaway copy.
  double preview_reward(const core::Decision& d) const;

  // -- scripted control, used by trace replay --------------------------------
  void advance_to(double t);
  ScheduledInfo apply_scripted(int task_id, int steps, const std::vector<int>& server_ids,
                               std::optional<double> init_override,
                               std::optional<double> exec_override);

  core::SystemState observe() const;
  double now() const { return now_; }
  bool done() const { return done_; }
  int decisions_made() const { return decisions_; }
  const EnvConfig& config() const { return cfg_; }
  const std::vector<core::ServerState>& servers() const { return servers_; }
  const std::vector<core::Task>& queue() const { return queue_; }
  int visible_queue_len() const;
  double queue_avg_wait() const;
  const std::vector<ScheduledInfo>& schedule_log() const { return schedule_log_; }
  int arrived_count() const { return static_cast<int>(next_arrival_); }
  int completed_count() const { return completed_; }

  void set_trace_sink(TraceSink* sink) { sink_ = sink; }

  static double sample_interarrival(std::mt19937_64& g, double rate);
  static int sample_parallelism(std::mt19937_64& g, const std::array<double, 4>& weights);

 private:
  void begin_episode(std::vector<Arrival> arrivals);
  void advance_clock();
  void process_events_until(double target);
  void finish_if_exhausted();
  double next_event_time() const;
  void emit(const TraceEvent& ev) {
    if (sink_ != nullptr) sink_->on_event(ev);
  }

  EnvConfig cfg_;
  double now_ = 0.0;
  bool done_ = false;
  int decisions_ = 0;
  int completed_ = 0;
  std::vector<core::ServerState> servers_;
  std::vector<double> completion_time_;  // per server, +inf when idle
  std::vector<int> running_task_;        // per server, -1 when idle
  std::vector<core::Task> queue_;
  std::vector<Arrival> arrivals_;
  size_t next_arrival_ = 0;
  std::vector<ScheduledInfo> schedule_log_;
  TraceSink* sink_ = nullptr;

  static constexpr double kInf = std::numeric_limits<double>::infinity();
};

}  // namespace eat::env
