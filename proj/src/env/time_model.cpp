#include "eat/env/time_model.hpp"

#include <stdexcept>

namespace eat::env {

TimeModel::TimeModel() {
  init_time_ = {{1, 33.5}, {2, 31.9}, {4, 35.0}, {8, 36.0}};
  per_step_time_ = {{1, 0.53}, {2, 0.29}, {4, 0.20}, {8, 0.15}};
}

double TimeModel::predict_init_time(int patches) const {
  auto it = init_time_.find(patches);
  if (it == init_time_.end()) throw std::out_of_range("no init time for this patch count");
  return it->second;
}

double TimeModel::per_step_time(int patches) const {
  auto it = per_step_time_.find(patches);
  if (it == per_step_time_.end()) throw std::out_of_range("no per-step time for this patch count");
  return it->second;
}

double TimeModel::predict_exec_time(int steps, int patches) const {
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  return steps * per_step_time(patches);
}

}  // namespace eat::env
