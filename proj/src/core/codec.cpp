#include "eat/core/codec.hpp"

#include <algorithm>
#include <cmath>

namespace eat::core {

SystemState encode_state(std::span<const ServerState> servers, std::span<const Task> queue,
                         double now, int queue_window) {
  if (queue_window < 0) throw std::invalid_argument("queue window must be >= 0");
  SystemState s(static_cast<int>(servers.size()) + queue_window);
  int col = 0;
  for (const auto& e : servers) {
    s.at(0, col) = e.available ? 1.0 : 0.0;
    s.at(1, col) = e.remaining_time;
    s.at(2, col) = static_cast<double>(e.loaded_model);
    ++col;
  }
  const int visible = std::min<int>(queue_window, static_cast<int>(queue.size()));
  for (int k = 0; k < visible; ++k) {
    const Task& t = queue[static_cast<size_t>(k)];
    s.at(0, col + k) = now - t.arrival_time;
    s.at(1, col + k) = static_cast<double>(t.parallelism);
    s.at(2, col + k) = 0.0;
  }
  return s;
}

Decision decode_action(const ActionVector& a, int queue_len, int steps_min, int steps_max) {
  if (steps_min < 1 || steps_max < steps_min)
    throw std::invalid_argument("bad steps range");
  if (a.exec_gate > 0.5) return Decision::noop();
  const int visible = std::min<int>(queue_len, static_cast<int>(a.task_prefs.size()));
  if (visible <= 0) return Decision::noop();

  int best = 0;
  for (int i = 1; i < visible; ++i) {
    if (a.task_prefs[static_cast<size_t>(i)] > a.task_prefs[static_cast<size_t>(best)]) best = i;
  }
  const double span = static_cast<double>(steps_max - steps_min);
  int steps = static_cast<int>(std::lround(steps_min + a.steps_fraction * span));
  steps = std::clamp(steps, steps_min, steps_max);
  return Decision::schedule(best, steps);
}

}  // namespace eat::core
