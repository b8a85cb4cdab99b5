#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>

// Distribution helpers backed by mt19937_64 directly, so sampled sequences
// depend only on the seed and never on a standard library's distribution
// internals.
namespace eat::core::rng {

/// Uniform draw in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * uniform01(g);
}

/// Exponential with the given rate (mean 1/rate).
inline double exponential(std::mt19937_64& g, double rate) {
  if (rate <= 0) throw std::invalid_argument("rate must be positive");
  return -std::log1p(-uniform01(g)) / rate;
}

/// Standard normal via Box-Muller; stateless, one draw per call.
inline double normal(std::mt19937_64& g) {
  const double u1 = 1.0 - uniform01(g);  // (0, 1]
  const double u2 = uniform01(g);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Index draw proportional to non-negative weights.
inline int categorical(std::mt19937_64& g, std::span<const double> weights) {
  double total = 0;
  for (double w : weights) {
    if (w < 0) throw std::invalid_argument("negative weight");
    total += w;
  }
  if (total <= 0) throw std::invalid_argument("weights must sum to a positive value");
  double u = uniform01(g) * total;
  for (size_t i = 0; i < weights.size(); ++i) {
    u -= weights[i];
    if (u < 0) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size()) - 1;
}

}  // namespace eat::core::rng
