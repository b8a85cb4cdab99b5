#include "eat/env/environment.hpp"

#include <algorithm>
#include <cmath>

#include "eat/core/codec.hpp"
#include "eat/core/rng.hpp"

namespace eat::env {

namespace {
constexpr std::array<int, 4> kPatchCounts{1, 2, 4, 8};
}

std::array<double, 4> EnvConfig::effective_weights() const {
  double total = 0;
  for (double w : parallelism_weights) total += w;
  if (total > 0) return parallelism_weights;
  std::array<double, 4> w{0, 0, 0, 0};
  for (size_t i = 0; i < kPatchCounts.size(); ++i) {
    if (kPatchCounts[i] <= cluster_size) w[i] = 1.0;
  }
  return w;
}

void EnvConfig::validate() const {
  if (cluster_size < 1) throw std::invalid_argument("cluster size must be >= 1");
  if (queue_window < 1) throw std::invalid_argument("queue window must be >= 1");
  if (arrival_rate <= 0) throw std::invalid_argument("arrival rate must be positive");
  if (tasks_per_episode < 1) throw std::invalid_argument("tasks per episode must be >= 1");
  if (time_limit <= 0 || decision_limit < 1) throw std::invalid_argument("bad episode limits");
  if (min_decision_interval <= 0) throw std::invalid_argument("decision interval must be positive");
  if (steps_min < 1 || steps_max < steps_min) throw std::invalid_argument("bad steps range");
  const auto w = effective_weights();
  for (size_t i = 0; i < w.size(); ++i) {
    if (w[i] < 0) throw std::invalid_argument("negative parallelism weight");
    if (w[i] > 0 && kPatchCounts[i] > cluster_size)
      throw std::invalid_argument("parallelism weight set for a split larger than the cluster");
  }
}

Environment::Environment(EnvConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

double Environment::sample_interarrival(std::mt19937_64& g, double rate) {
  return core::rng::exponential(g, rate);
}

int Environment::sample_parallelism(std::mt19937_64& g, const std::array<double, 4>& weights) {
  return kPatchCounts[static_cast<size_t>(core::rng::categorical(g, weights))];
}

core::SystemState Environment::reset(std::uint64_t seed) {
  std::mt19937_64 g(seed);
  const auto weights = cfg_.effective_weights();
  std::vector<Arrival> arrivals;
  arrivals.reserve(static_cast<size_t>(cfg_.tasks_per_episode));
  double t = 0;
  for (int k = 0; k < cfg_.tasks_per_episode; ++k) {
    t += sample_interarrival(g, cfg_.arrival_rate);
    arrivals.push_back({t, sample_parallelism(g, weights)});
  }
  begin_episode(std::move(arrivals));
  return observe();
}

core::SystemState Environment::reset(std::vector<Arrival> arrivals) {
  for (size_t i = 0; i + 1 < arrivals.size(); ++i) {
    if (arrivals[i + 1].time < arrivals[i].time)
      throw std::invalid_argument("arrival times must be ascending");
  }
  begin_episode(std::move(arrivals));
  return observe();
}

void Environment::begin_episode(std::vector<Arrival> arrivals) {
  now_ = 0;
  done_ = false;
  decisions_ = 0;
  completed_ = 0;
  arrivals_ = std::move(arrivals);
  next_arrival_ = 0;
  queue_.clear();
  schedule_log_.clear();
  servers_.assign(static_cast<size_t>(cfg_.cluster_size), {});
  completion_time_.assign(servers_.size(), kInf);
  running_task_.assign(servers_.size(), -1);
  for (size_t i = 0; i < servers_.size(); ++i) servers_[i].id = static_cast<int>(i);
  // Deliver any arrivals scripted at t = 0 before the first decision.
  process_events_until(0.0);
}

int Environment::visible_queue_len() const {
  return std::min<int>(cfg_.queue_window, static_cast<int>(queue_.size()));
}

double Environment::queue_avg_wait() const {
  if (queue_.empty()) return 0.0;
  double sum = 0;
  for (const auto& t : queue_) sum += now_ - t.arrival_time;
  return sum / static_cast<double>(queue_.size());
}

core::SystemState Environment::observe() const {
  return core::encode_state(servers_, queue_, now_, cfg_.queue_window);
}

double Environment::next_event_time() const {
  double t = kInf;
  if (next_arrival_ < arrivals_.size()) t = std::min(t, arrivals_[next_arrival_].time);
  for (double c : completion_time_) t = std::min(t, c);
  return t;
}

void Environment::process_events_until(double target) {
  for (;;) {
    // Earliest pending completion, ties by server id.
    int comp_server = -1;
    double comp_t = kInf;
    for (size_t i = 0; i < completion_time_.size(); ++i) {
      if (completion_time_[i] < comp_t) {
        comp_t = completion_time_[i];
        comp_server = static_cast<int>(i);
      }
    }
    const double arr_t =
        next_arrival_ < arrivals_.size() ? arrivals_[next_arrival_].time : kInf;

    if (comp_t <= target && comp_t <= arr_t) {
      // All servers of the gang finish at the same instant; release them together.
      const int task_id = running_task_[static_cast<size_t>(comp_server)];
      TraceEvent ev;
      ev.kind = TraceEvent::Kind::Completion;
      ev.time = comp_t;
      ev.task_id = task_id;
      for (size_t i = 0; i < servers_.size(); ++i) {
        if (running_task_[i] == task_id) {
          ev.server_ids.push_back(static_cast<int>(i));
          servers_[i].available = true;
          servers_[i].remaining_time = 0.0;
          completion_time_[i] = kInf;
          running_task_[i] = -1;
        }
      }
      ++completed_;
      emit(ev);
      continue;
    }
    if (arr_t <= target) {
      const Arrival& a = arrivals_[next_arrival_];
      core::Task task;
      task.id = static_cast<int>(next_arrival_) + 1;
      task.prompt_id = task.id;
      task.parallelism = a.parallelism;
      task.arrival_time = a.time;
      queue_.push_back(task);
      ++next_arrival_;
      TraceEvent ev;
      ev.kind = TraceEvent::Kind::Arrival;
      ev.time = a.time;
      ev.task_id = task.id;
      ev.parallelism = a.parallelism;
      emit(ev);
      continue;
    }
    break;
  }
  // Remaining busy time decreases as the clock moves.
  for (size_t i = 0; i < servers_.size(); ++i) {
    if (!servers_[i].available) servers_[i].remaining_time = completion_time_[i] - target;
  }
}

void Environment::finish_if_exhausted() {
  const bool all_arrived = next_arrival_ >= arrivals_.size();
  const bool all_idle =
      std::all_of(servers_.begin(), servers_.end(), [](const auto& s) { return s.available; });
  if (all_arrived && all_idle && queue_.empty()) done_ = true;
}

void Environment::advance_clock() {
  double target = now_ + cfg_.min_decision_interval;
  const double ev = next_event_time();
  if (ev == kInf) {
    finish_if_exhausted();
    if (done_) return;
    // Nothing will happen on its own; keep decision slots ticking so an agent
    // that keeps waiting still runs into the episode limits.
  } else {
    target = std::max(target, ev);
  }
  bool hit_time_limit = false;
  if (target >= cfg_.time_limit) {
    target = cfg_.time_limit;
    hit_time_limit = true;
  }
  process_events_until(target);
  now_ = target;
  if (hit_time_limit) done_ = true;
  finish_if_exhausted();
}

StepOutcome Environment::step(const core::Decision& d) {
  if (done_) throw std::logic_error("step on a finished episode");
  ++decisions_;

  StepOutcome out;
  if (d.is_schedule()) {
    if (d.task_index < 0 || d.task_index >= visible_queue_len())
      throw std::invalid_argument("decision references a task outside the visible queue");
    const core::Task task = queue_[static_cast<size_t>(d.task_index)];
    const Placement p = select_servers(servers_, task.parallelism, task.parallelism);
    if (!p.feasible) {
      out.infeasible = true;
      TraceEvent ev;
      ev.kind = TraceEvent::Kind::NoOp;
      ev.time = now_;
      ev.task_id = task.id;
      emit(ev);
    } else {
      const int steps = std::clamp(d.steps, cfg_.steps_min, cfg_.steps_max);
      const double init = p.reuse ? 0.0 : cfg_.time_model.predict_init_time(task.parallelism);
      const double exec = cfg_.time_model.predict_exec_time(steps, task.parallelism);

      ScheduledInfo info;
      info.task_id = task.id;
      info.steps = steps;
      info.decision_time = now_;
      info.wait = now_ - task.arrival_time;
      info.init = init;
      info.exec = exec;
      info.quality = cfg_.quality_model.quality_of(steps);
      info.reuse = p.reuse;
      info.server_ids = p.server_ids;

      queue_.erase(queue_.begin() + d.task_index);
      for (int id : p.server_ids) {
        auto& s = servers_[static_cast<size_t>(id)];
        s.available = false;
        s.remaining_time = init + exec;
        s.loaded_model = task.parallelism;
        completion_time_[static_cast<size_t>(id)] = now_ + init + exec;
        running_task_[static_cast<size_t>(id)] = task.id;
      }
      info.reward =
          compute_reward(info.quality, info.response(), queue_avg_wait(), cfg_.reward);
      out.reward = info.reward;
      out.scheduled = info;
      schedule_log_.push_back(info);

      TraceEvent ev;
      ev.kind = TraceEvent::Kind::Schedule;
      ev.time = now_;
      ev.task_id = task.id;
      ev.parallelism = task.parallelism;
      ev.steps = steps;
      ev.wait = info.wait;
      ev.init = init;
      ev.exec = exec;
      ev.quality = info.quality;
      ev.reward = info.reward;
      ev.reuse = p.reuse;
      ev.server_ids = p.server_ids;
      emit(ev);
    }
  } else {
    TraceEvent ev;
    ev.kind = TraceEvent::Kind::NoOp;
    ev.time = now_;
    emit(ev);
  }

  advance_clock();
  if (decisions_ >= cfg_.decision_limit) done_ = true;
  if (done_) {
    TraceEvent ev;
    ev.kind = TraceEvent::Kind::EpisodeEnd;
    ev.time = now_;
    emit(ev);
  }
  out.done = done_;
  out.state = observe();
  return out;
}

double Environment::preview_reward(const core::Decision& d) const {
  Environment copy = *this;
  copy.sink_ = nullptr;
  return copy.step(d).reward;
}

void Environment::advance_to(double t) {
  if (t < now_) throw std::invalid_argument("cannot advance backwards");
  process_events_until(t);
  now_ = t;
}

ScheduledInfo Environment::apply_scripted(int task_id, int steps,
                                          const std::vector<int>& server_ids,
                                          std::optional<double> init_override,
                                          std::optional<double> exec_override) {
  auto it = std::find_if(queue_.begin(), queue_.end(),
                         [&](const core::Task& t) { return t.id == task_id; });
  if (it == queue_.end()) throw std::runtime_error("task is not queued");
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  if (server_ids.empty()) throw std::invalid_argument("no servers named");
  const core::Task task = *it;

  bool all_loaded = true;
  for (int id : server_ids) {
    if (id < 0 || id >= static_cast<int>(servers_.size()))
      throw std::runtime_error("unknown server id");
    const auto& s = servers_[static_cast<size_t>(id)];
    if (!s.available) throw std::runtime_error("server is busy");
    if (s.loaded_model != task.parallelism) all_loaded = false;
  }

  const double init = init_override ? *init_override
                     : all_loaded   ? 0.0
                                    : cfg_.time_model.predict_init_time(task.parallelism);
  const double exec =
      exec_override ? *exec_override : cfg_.time_model.predict_exec_time(steps, task.parallelism);

  ScheduledInfo info;
  info.task_id = task.id;
  info.steps = steps;
  info.decision_time = now_;
  info.wait = now_ - task.arrival_time;
  info.init = init;
  info.exec = exec;
  info.quality = cfg_.quality_model.quality_of(steps);
  info.reuse = init == 0.0;
  info.server_ids = server_ids;

  queue_.erase(it);
  for (int id : server_ids) {
    auto& s = servers_[static_cast<size_t>(id)];
    s.available = false;
    s.remaining_time = init + exec;
    s.loaded_model = task.parallelism;
    completion_time_[static_cast<size_t>(id)] = now_ + init + exec;
    running_task_[static_cast<size_t>(id)] = task.id;
  }
  info.reward = compute_reward(info.quality, info.response(), queue_avg_wait(), cfg_.reward);
  schedule_log_.push_back(info);

  TraceEvent ev;
  ev.kind = TraceEvent::Kind::Schedule;
  ev.time = now_;
  ev.task_id = task.id;
  ev.parallelism = task.parallelism;
  ev.steps = steps;
  ev.wait = info.wait;
  ev.init = init;
  ev.exec = exec;
  ev.quality = info.quality;
  ev.reward = info.reward;
  ev.reuse = info.reuse;
  ev.server_ids = server_ids;
  emit(ev);
  return info;
}

}  // namespace eat::env
