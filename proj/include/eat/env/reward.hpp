#pragma once

namespace eat::env {

/// Coefficients of the per-decision reward. The time term is the reciprocal
/// of a weighted sum of the scheduled task's response time and the mean
/// waiting time of the tasks still queued; its denominator is floored at
/// `denom_floor` so the term is bounded by 1/denom_floor. The floor is set
/// high enough (0.4 by default, i.e. a cap of 2.5) that for responses a
/// reused model can reach, step-count choice is decided by the quality term
/// and not by vanishing-latency arbitrage.
struct RewardParams {
  double alpha_q = 1.0;    // weight of the quality term
  double beta_t = 0.01;    // weight of the scheduled task's response time
  double mu_t = 0.01;      // weight of the queue's mean waiting time
  double lambda_q = 1.0;   // weight of the quality penalty
  double q_min = 2.3;      // threshold under which the penalty fires
  double p_quality = 1.0;  // penalty magnitude
  double denom_floor = 0.4;
};

/// reward = alpha_q * quality - lambda_q * penalty + 1 / max(floor, beta_t *
/// response + mu_t * queue_wait). Penalty is p_quality when quality < q_min,
/// else 0.
double compute_reward(double quality, double response_time, double queue_avg_wait,
                      const RewardParams& p);

}  // namespace eat::env
