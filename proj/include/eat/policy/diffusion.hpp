#pragma once

#include <vector>

namespace eat::policy {

enum class BetaSchedule { Linear, Cosine };

struct DiffusionConfig {
  int steps = 10;
  BetaSchedule beta_schedule = BetaSchedule::Linear;
  double beta_min = 1e-4;  // linear schedule endpoints
  double beta_max = 0.2;

  void validate() const;
};

/// Precomputed noise schedule for a T-step denoising chain. Indices run
/// 1..T for per-step quantities; alpha_bar(0) == 1 so the i=1 posterior
/// variance vanishes and the final transition is deterministic.
class DiffusionSchedule {
 public:
  explicit DiffusionSchedule(const DiffusionConfig& cfg = {});

  int steps() const { return static_cast<int>(beta_.size()); }

  double beta(int i) const { return beta_.at(static_cast<std::size_t>(i - 1)); }
  double alpha(int i) const { return 1.0 - beta(i); }
  double alpha_bar(int i) const { return alpha_bar_.at(static_cast<std::size_t>(i)); }

  /// Variance of the reverse transition at step i:
  ///   beta_i * (1 - alpha_bar_{i-1}) / (1 - alpha_bar_i).
  double posterior_variance(int i) const;

 private:
  std::vector<double> beta_;       // beta_[i-1] = beta_i
  std::vector<double> alpha_bar_;  // alpha_bar_[i], index 0..T
};

}  // namespace eat::policy
