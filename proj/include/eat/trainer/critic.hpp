#pragma once

#include <random>
#include <span>
#include <string>

#include "eat/core/types.hpp"
#include "eat/nn/dense.hpp"
#include "eat/nn/graph.hpp"

namespace eat::trainer {

struct CriticConfig {
  int n_servers = 4;
  int queue_window = 5;
  int hidden = 256;
  double time_scale = 100.0;  // must match the actor's observation scaling

  int state_dim() const { return 3 * (n_servers + queue_window); }
  int action_dim() const { return queue_window + 2; }
  void validate() const;
};

/// One Q network over (flattened state, action vector) rows.
class Critic {
 public:
  Critic() = default;
  Critic(const CriticConfig& cfg, std::mt19937_64& g);

  /// states: batch x state_dim, actions: batch x action_dim -> batch x 1.
  nn::Node* forward(nn::Graph& g, nn::Node* states, nn::Node* actions);

  /// Plain evaluation of a single pair.
  double value(const core::SystemState& s, const core::ActionVector& a);

  void collect(const std::string& prefix, nn::NamedParams& out);

 private:
  CriticConfig cfg_;
  nn::DenseNet net_;
};

/// Clipped double-Q pair plus slow-moving copies used for bootstrap targets.
class TwinCritics {
 public:
  TwinCritics(const CriticConfig& cfg, std::mt19937_64& g);

  nn::Node* min_live(nn::Graph& g, nn::Node* states, nn::Node* actions);
  nn::Node* min_target(nn::Graph& g, nn::Node* states, nn::Node* actions);

  Critic& q1() { return q1_; }
  Critic& q2() { return q2_; }
  Critic& target_q1() { return target_q1_; }
  Critic& target_q2() { return target_q2_; }

  /// target <- tau * live + (1 - tau) * target, elementwise over all weights.
  void soft_update(double tau);

  void collect_live(nn::NamedParams& out);    // what the optimizer trains
  void collect_all(nn::NamedParams& out);     // live + targets, for checkpoints

  const CriticConfig& config() const { return cfg_; }

 private:
  CriticConfig cfg_;
  Critic q1_, q2_;
  Critic target_q1_, target_q2_;
};

/// Flattened, normalised state rows stacked into a batch matrix.
nn::Tensor batch_state_rows(std::span<const core::SystemState* const> states,
                            const CriticConfig& cfg);

}  // namespace eat::trainer
