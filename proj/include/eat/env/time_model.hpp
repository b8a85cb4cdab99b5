#pragma once

#include <map>

namespace eat::env {

/// Deterministic cost model for patch-parallel image generation, calibrated
/// against bench measurements on RTX 4090-class nodes. Keys are patch counts;
/// the 8-patch row is extrapolated from the 1/2/4 trend.
class TimeModel {
 public:
  TimeModel();

  /// Seconds to deploy (load + warm up) the model split into `patches`.
  double predict_init_time(int patches) const;

  /// Seconds to run `steps` denoising iterations at the given split.
  double predict_exec_time(int steps, int patches) const;

  double per_step_time(int patches) const;

  void set_init_time(int patches, double seconds) { init_time_[patches] = seconds; }
  void set_per_step_time(int patches, double seconds) { per_step_time_[patches] = seconds; }

  const std::map<int, double>& init_times() const { return init_time_; }
  const std::map<int, double>& per_step_times() const { return per_step_time_; }

 private:
  std::map<int, double> init_time_;
  std::map<int, double> per_step_time_;
};

}  // namespace eat::env
