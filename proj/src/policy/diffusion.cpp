#include "eat/policy/diffusion.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace eat::policy {

void DiffusionConfig::validate() const {
  if (steps < 1) throw std::invalid_argument("diffusion steps must be >= 1");
  if (beta_schedule == BetaSchedule::Linear) {
    if (!(beta_min > 0.0) || !(beta_max < 1.0) || beta_min > beta_max)
      throw std::invalid_argument("linear beta schedule needs 0 < beta_min <= beta_max < 1");
  }
}

namespace {

std::vector<double> make_betas(const DiffusionConfig& cfg) {
  const int T = cfg.steps;
  std::vector<double> beta(static_cast<std::size_t>(T));
  if (cfg.beta_schedule == BetaSchedule::Linear) {
    for (int i = 1; i <= T; ++i) {
      const double frac = (T == 1) ? 0.0 : static_cast<double>(i - 1) / (T - 1);
      beta[static_cast<std::size_t>(i - 1)] = cfg.beta_min + frac * (cfg.beta_max - cfg.beta_min);
    }
  } else {
    // Squared-cosine alpha_bar with the usual 0.008 offset; betas are the
    // implied step ratios, capped below 1 to keep the chain non-degenerate.
    constexpr double s = 0.008;
    auto abar = [&](double t) {
      const double x = (t / T + s) / (1.0 + s) * std::numbers::pi / 2.0;
      return std::cos(x) * std::cos(x);
    };
    const double abar0 = abar(0.0);
    double prev = 1.0;
    for (int i = 1; i <= T; ++i) {
      const double cur = abar(static_cast<double>(i)) / abar0;
      beta[static_cast<std::size_t>(i - 1)] = std::min(1.0 - cur / prev, 0.999);
      prev = cur;
    }
  }
  return beta;
}

}  // namespace

DiffusionSchedule::DiffusionSchedule(const DiffusionConfig& cfg) {
  cfg.validate();
  beta_ = make_betas(cfg);
  alpha_bar_.resize(beta_.size() + 1);
  alpha_bar_[0] = 1.0;
  for (std::size_t i = 0; i < beta_.size(); ++i)
    alpha_bar_[i + 1] = alpha_bar_[i] * (1.0 - beta_[i]);
}

double DiffusionSchedule::posterior_variance(int i) const {
  const double denom = 1.0 - alpha_bar(i);
  if (denom <= 0.0) return 0.0;
  return beta(i) * (1.0 - alpha_bar(i - 1)) / denom;
}

}  // namespace eat::policy
