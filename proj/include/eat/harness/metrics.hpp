#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "eat/baselines/agent.hpp"
#include "eat/harness/config.hpp"

namespace eat::harness {

struct EpisodeRecord {
  std::uint64_t seed = 0;
  double total_reward = 0.0;
  int decisions = 0;
  int arrived = 0;
  int scheduled = 0;
  int completed = 0;
  double mean_latency = 0.0;  // response time over this episode's scheduled tasks
  double mean_quality = 0.0;
  int qos_violations = 0;     // scheduled tasks below the quality threshold
  int reloads = 0;            // scheduled tasks that needed a fresh model load
};

struct EvalMetrics {
  int episodes = 0;
  int tasks_scheduled = 0;
  double mean_episode_reward = 0.0;
  double mean_latency = 0.0;        // pooled over every scheduled task
  double mean_quality = 0.0;
  double qos_violation_rate = 0.0;
  double reload_rate = 0.0;         // fraction of scheduled tasks loaded cold
  double efficiency = 0.0;          // mean quality per second of response latency
  double mean_completed = 0.0;
  double mean_decisions = 0.0;
};

struct EvalResult {
  EvalMetrics metrics;
  std::vector<EpisodeRecord> episodes;
};

/// Builds the agent that plays the episode seeded with `seed`. Sequence
/// optimizers plan per episode, so construction may be expensive.
using AgentFactory = std::function<std::unique_ptr<baselines::Agent>(std::uint64_t seed)>;

/// Streams simulator events as one JSON object per line, tagged by episode.
class JsonlTraceWriter : public env::TraceSink {
 public:
  explicit JsonlTraceWriter(std::ostream& out) : out_(out) {}

  void begin_episode(std::uint64_t seed);
  void on_event(const env::TraceEvent& ev) override;

 private:
  std::ostream& out_;
};

/// Plays eval.episodes episodes seeded eval.seed, eval.seed+1, ... and pools
/// the per-task numbers.
EvalResult run_eval(const RunConfig& cfg, const AgentFactory& make,
                    JsonlTraceWriter* trace = nullptr);

EvalMetrics pool_metrics(const std::vector<EpisodeRecord>& episodes);

/// Rebuilds per-episode records from a trace stream. `q_min` is the quality
/// threshold used to re-count violations.
std::vector<EpisodeRecord> records_from_trace(std::istream& in, double q_min);

void write_episodes_csv(const std::string& path, const std::vector<EpisodeRecord>& episodes);
void write_metrics_csv(const std::string& path, const EvalMetrics& m);

}  // namespace eat::harness
