#include "eat/env/reward.hpp"

#include <algorithm>
#include <stdexcept>

namespace eat::env {

double compute_reward(double quality, double response_time, double queue_avg_wait,
                      const RewardParams& p) {
  if (response_time < 0 || queue_avg_wait < 0)
    throw std::invalid_argument("times must be non-negative");
  if (p.denom_floor <= 0) throw std::invalid_argument("denominator floor must be positive");
  const double penalty = quality < p.q_min ? p.p_quality : 0.0;
  const double denom =
      std::max(p.denom_floor, p.beta_t * response_time + p.mu_t * queue_avg_wait);
  return p.alpha_q * quality - p.lambda_q * penalty + 1.0 / denom;
}

}  // namespace eat::env
