#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace eat::core {

/// One generation request. `parallelism` is the number of servers the task
/// must occupy simultaneously (its patch count); the model group a task can
/// reuse is keyed by this value.
struct Task {
  int id = 0;
  int prompt_id = 0;
  int parallelism = 1;
  double arrival_time = 0.0;
  std::optional<int> assigned_steps;
  std::optional<double> start_time;
  std::optional<double> completion_time;
};

/// Snapshot of a single server. Invariant: available == (remaining_time == 0).
/// loaded_model is the parallelism group of the last deployed model, 0 when
/// the server has never loaded one.
struct ServerState {
  int id = 0;
  bool available = true;
  double remaining_time = 0.0;
  int loaded_model = 0;
};

/// Observation matrix with 3 rows and (servers + queue window) columns.
/// Server column e: (availability, remaining busy time, loaded model group).
/// Task column k:   (waiting time, parallelism, 0).
class SystemState {
 public:
  SystemState() = default;
  explicit SystemState(int cols) : cols_(cols), m_(3 * static_cast<size_t>(cols), 0.0) {}

  int cols() const { return cols_; }
  double& at(int row, int col) { return m_[static_cast<size_t>(row) * cols_ + col]; }
  double at(int row, int col) const { return m_[static_cast<size_t>(row) * cols_ + col]; }
  const std::vector<double>& data() const { return m_; }

  bool same_shape(const SystemState& other) const { return cols_ == other.cols_; }

 private:
  int cols_ = 0;
  std::vector<double> m_;
};

/// Raw policy output in [0,1]^(l+2): one gate scalar, one steps scalar and l
/// per-slot task preferences.
struct ActionVector {
  double exec_gate = 1.0;     // > 0.5 means "do nothing this slot"
  double steps_fraction = 0;  // maps linearly onto [steps_min, steps_max]
  std::vector<double> task_prefs;

  size_t size() const { return task_prefs.size() + 2; }

  std::vector<double> flat() const {
    std::vector<double> v;
    v.reserve(size());
    v.push_back(exec_gate);
    v.push_back(steps_fraction);
    v.insert(v.end(), task_prefs.begin(), task_prefs.end());
    return v;
  }

  static ActionVector from_flat(const std::vector<double>& v) {
    if (v.size() < 2) throw std::invalid_argument("action vector needs at least 2 entries");
    ActionVector a;
    a.exec_gate = v[0];
    a.steps_fraction = v[1];
    a.task_prefs.assign(v.begin() + 2, v.end());
    return a;
  }
};

/// Discrete decision decoded from an ActionVector.
struct Decision {
  enum class Kind { NoOp, Schedule };
  Kind kind = Kind::NoOp;
  int task_index = -1;  // position in the visible queue window
  int steps = 0;

  static Decision noop() { return {}; }
  static Decision schedule(int task_index, int steps) {
    return {Kind::Schedule, task_index, steps};
  }

  bool is_schedule() const { return kind == Kind::Schedule; }
};

/// One transition for off-policy training.
struct Experience {
  SystemState state;
  std::vector<double> action;  // flat ActionVector
  double reward = 0.0;
  SystemState next_state;
  bool done = false;
};

}  // namespace eat::core
