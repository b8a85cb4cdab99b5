#include "eat/harness/metrics.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

#include "eat/core/codec.hpp"
#include "eat/harness/run_dir.hpp"

namespace eat::harness {

void JsonlTraceWriter::begin_episode(std::uint64_t seed) {
  nlohmann::json j;
  j["event"] = "episode_start";
  j["seed"] = seed;
  out_ << j.dump() << '\n';
}

void JsonlTraceWriter::on_event(const env::TraceEvent& ev) {
  nlohmann::json j;
  switch (ev.kind) {
    case env::TraceEvent::Kind::Arrival:
      j["event"] = "arrival";
      j["t"] = ev.time;
      j["task"] = ev.task_id;
      j["parallelism"] = ev.parallelism;
      break;
    case env::TraceEvent::Kind::Schedule:
      j["event"] = "schedule";
      j["t"] = ev.time;
      j["task"] = ev.task_id;
      j["parallelism"] = ev.parallelism;
      j["steps"] = ev.steps;
      j["wait"] = ev.wait;
      j["init"] = ev.init;
      j["exec"] = ev.exec;
      j["quality"] = ev.quality;
      j["reward"] = ev.reward;
      j["reuse"] = ev.reuse;
      j["servers"] = ev.server_ids;
      break;
    case env::TraceEvent::Kind::NoOp:
      j["event"] = "noop";
      j["t"] = ev.time;
      j["reward"] = ev.reward;
      break;
    case env::TraceEvent::Kind::Completion:
      j["event"] = "completion";
      j["t"] = ev.time;
      j["task"] = ev.task_id;
      break;
    case env::TraceEvent::Kind::EpisodeEnd:
      j["event"] = "episode_end";
      j["t"] = ev.time;
      break;
  }
  out_ << j.dump() << '\n';
}

EvalResult run_eval(const RunConfig& cfg, const AgentFactory& make, JsonlTraceWriter* trace) {
  cfg.validate();
  EvalResult result;
  result.episodes.reserve(static_cast<std::size_t>(cfg.eval_episodes));
  for (int ep = 0; ep < cfg.eval_episodes; ++ep) {
    const std::uint64_t seed = cfg.eval_seed + static_cast<std::uint64_t>(ep);
    auto agent = make(seed);
    env::Environment env(cfg.env);
    if (trace != nullptr) {
      trace->begin_episode(seed);
      env.set_trace_sink(trace);
    }
    env.reset(seed);
    EpisodeRecord rec;
    rec.seed = seed;
    while (!env.done()) {
      const core::Decision d = agent->decide(env);
      const env::StepOutcome out = env.step(d);
      rec.total_reward += out.reward;
      ++rec.decisions;
    }
    rec.arrived = env.arrived_count();
    rec.completed = env.completed_count();
    const auto& log = env.schedule_log();
    rec.scheduled = static_cast<int>(log.size());
    double lat = 0.0, qual = 0.0;
    for (const auto& s : log) {
      lat += s.response();
      qual += s.quality;
      if (s.quality < cfg.env.reward.q_min) ++rec.qos_violations;
      if (!s.reuse) ++rec.reloads;
    }
    if (!log.empty()) {
      rec.mean_latency = lat / static_cast<double>(log.size());
      rec.mean_quality = qual / static_cast<double>(log.size());
    }
    result.episodes.push_back(rec);
  }
  result.metrics = pool_metrics(result.episodes);
  return result;
}

EvalMetrics pool_metrics(const std::vector<EpisodeRecord>& episodes) {
  EvalMetrics m;
  m.episodes = static_cast<int>(episodes.size());
  if (episodes.empty()) return m;
  double lat = 0.0, qual = 0.0;
  int violations = 0, reloads = 0;
  for (const auto& e : episodes) {
    m.tasks_scheduled += e.scheduled;
    m.mean_episode_reward += e.total_reward;
    m.mean_completed += e.completed;
    m.mean_decisions += e.decisions;
    lat += e.mean_latency * e.scheduled;
    qual += e.mean_quality * e.scheduled;
    violations += e.qos_violations;
    reloads += e.reloads;
  }
  const auto n = static_cast<double>(episodes.size());
  m.mean_episode_reward /= n;
  m.mean_completed /= n;
  m.mean_decisions /= n;
  if (m.tasks_scheduled > 0) {
    m.mean_latency = lat / m.tasks_scheduled;
    m.mean_quality = qual / m.tasks_scheduled;
    m.qos_violation_rate = static_cast<double>(violations) / m.tasks_scheduled;
    m.reload_rate = static_cast<double>(reloads) / m.tasks_scheduled;
  }
  if (m.mean_latency > 0.0) m.efficiency = m.mean_quality / m.mean_latency;
  return m;
}

std::vector<EpisodeRecord> records_from_trace(std::istream& in, double q_min) {
  std::vector<EpisodeRecord> out;
  std::string line;
  double lat = 0.0, qual = 0.0;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error("trace line " + std::to_string(lineno) + ": " + e.what());
    }
    const std::string event = j.at("event").get<std::string>();
    if (event == "episode_start") {
      out.emplace_back();
      out.back().seed = j.at("seed").get<std::uint64_t>();
      lat = qual = 0.0;
      continue;
    }
    if (out.empty())
      throw std::runtime_error("trace line " + std::to_string(lineno) +
                               ": event before episode_start");
    EpisodeRecord& rec = out.back();
    if (event == "arrival") {
      ++rec.arrived;
    } else if (event == "schedule") {
      ++rec.decisions;
      ++rec.scheduled;
      const double response = j.at("wait").get<double>() + j.at("init").get<double>() +
                              j.at("exec").get<double>();
      const double quality = j.at("quality").get<double>();
      lat += response;
      qual += quality;
      if (quality < q_min) ++rec.qos_violations;
      if (!j.at("reuse").get<bool>()) ++rec.reloads;
      rec.total_reward += j.at("reward").get<double>();
    } else if (event == "noop") {
      ++rec.decisions;
      rec.total_reward += j.at("reward").get<double>();
    } else if (event == "completion") {
      ++rec.completed;
    } else if (event == "episode_end") {
      if (rec.scheduled > 0) {
        rec.mean_latency = lat / rec.scheduled;
        rec.mean_quality = qual / rec.scheduled;
      }
    } else {
      throw std::runtime_error("trace line " + std::to_string(lineno) + ": unknown event '" +
                               event + "'");
    }
  }
  return out;
}

void write_episodes_csv(const std::string& path, const std::vector<EpisodeRecord>& episodes) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(episodes.size());
  for (const auto& e : episodes) {
    rows.push_back({std::to_string(e.seed), format_double(e.total_reward),
                    format_int(e.decisions), format_int(e.arrived), format_int(e.scheduled),
                    format_int(e.completed), format_double(e.mean_latency),
                    format_double(e.mean_quality), format_int(e.qos_violations),
                    format_int(e.reloads)});
  }
  write_csv(path,
            {"seed", "total_reward", "decisions", "arrived", "scheduled", "completed",
             "mean_latency", "mean_quality", "qos_violations", "reloads"},
            rows);
}

void write_metrics_csv(const std::string& path, const EvalMetrics& m) {
  write_csv(path,
            {"episodes", "tasks_scheduled", "mean_episode_reward", "mean_latency", "mean_quality",
             "qos_violation_rate", "reload_rate", "efficiency", "mean_completed",
             "mean_decisions"},
            {{format_int(m.episodes), format_int(m.tasks_scheduled),
              format_double(m.mean_episode_reward), format_double(m.mean_latency),
              format_double(m.mean_quality), format_double(m.qos_violation_rate),
              format_double(m.reload_rate), format_double(m.efficiency),
              format_double(m.mean_completed), format_double(m.mean_decisions)}});
}

}  // namespace eat::harness
