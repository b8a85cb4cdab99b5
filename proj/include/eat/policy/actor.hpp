#pragma once

#include <random>
#include <vector>

#include "eat/core/types.hpp"
#include "eat/nn/attention.hpp"
#include "eat/nn/dense.hpp"
#include "eat/nn/graph.hpp"
#include "eat/policy/diffusion.hpp"

namespace eat::policy {

/// How the final denoised estimate is recovered from the last noise
/// prediction:
///  - TanhResidual:      x0 = x_1 / sqrt(abar_1) - tanh(eps) / sqrt(abar_0)
///  - EpsilonInversion:  x0 = (x_1 - sqrt(1 - abar_1) * eps) / sqrt(abar_1)
enum class X0Form { TanhResidual, EpsilonInversion };

struct ActorConfig {
  int n_servers = 4;
  int queue_window = 5;

  bool use_attention = true;  // false: dense state encoder instead
  bool use_diffusion = true;  // false: direct mean head instead

  int attention_dim = 16;     // query/key width
  int encoder_hidden = 64;    // dense-encoder ablation only
  int denoiser_hidden = 256;  // also the mean head width
  int time_embed_dim = 16;    // sinusoidal embedding of the chain index

  X0Form x0_form = X0Form::TanhResidual;
  DiffusionConfig diffusion;

  double time_scale = 100.0;  // divisor for wait/remaining-time entries
  double logvar_min = -10.0;
  double logvar_max = 4.0;
  double logvar_bias_init = -1.386294361119891;  // sigma = 0.5

  int action_dim() const { return queue_window + 2; }
  int feature_dim() const { return n_servers + queue_window; }
  void validate() const;
};

/// State matrix as one token per column: (n_servers + queue_window) rows of
/// width 3, with the time-valued entries divided by `time_scale`.
nn::Tensor state_tokens(const core::SystemState& s, int n_servers, double time_scale);

/// Row-major flattening of the same normalised matrix, as a 1 x 3*(E+l) row.
nn::Tensor state_flat_row(const core::SystemState& s, int n_servers, double time_scale);

/// Stochastic policy: a state encoder (self-attention over state columns, or
/// a dense net) conditions an iterative denoiser whose output parameterises a
/// squashed Gaussian over action vectors.
class Actor {
 public:
  Actor(const ActorConfig& cfg, std::mt19937_64& g);

  /// All randomness consumed by one differentiable sample, drawn up front so
  /// the graph itself is deterministic given (states, noises).
  struct NoiseSet {
    nn::Tensor x_init;                    // batch x action_dim
    std::vector<nn::Tensor> step_noise;   // one per chain step T..2
    nn::Tensor head_noise;                // batch x action_dim
  };

  struct Sample {
    nn::Node* action = nullptr;   // batch x action_dim, entries in [0, 1]
    nn::Node* pre_squash = nullptr;
    nn::Node* x0 = nullptr;
    nn::Node* logvar = nullptr;
    nn::Node* entropy = nullptr;  // batch x 1, Gaussian differential entropy
  };

  NoiseSet draw_noises(int batch, std::mt19937_64& g) const;

  /// Encoded state features, batch x feature_dim.
  nn::Node* features(nn::Graph& g, std::span<const core::SystemState* const> states);

  /// Full reparameterised sampling chain over a batch of states.
  Sample sample(nn::Graph& g, std::span<const core::SystemState* const> states,
                const NoiseSet& noises);

  /// Convenience single-state rollout step.
  core::ActionVector act(const core::SystemState& s, std::mt19937_64& g);

  /// One reverse-chain transition x_i -> x_{i-1} on plain tensors (no
  /// gradients), with the transition noise drawn from `g`.
  nn::Tensor reverse_step(const nn::Tensor& x, int i, const core::SystemState& s,
                          std::mt19937_64& g);

  /// Denoised estimate produced from x_1 (or x_i at the end of a truncated
  /// chain) under the configured recovery form.
  nn::Tensor denoised_x0(const nn::Tensor& x, const core::SystemState& s);

  void collect(nn::NamedParams& out);

  const ActorConfig& config() const { return cfg_; }
  const DiffusionSchedule& schedule() const { return sched_; }

 private:
  nn::Node* feature_row(nn::Graph& g, const core::SystemState& s);
  nn::Node* predict_noise(nn::Graph& g, nn::Node* x, int i, nn::Node* fs);
  nn::Node* reverse_mean(nn::Graph& g, nn::Node* x, int i, nn::Node* fs);
  nn::Node* recover_x0(nn::Graph& g, nn::Node* x1, nn::Node* fs);
  nn::Tensor time_embedding_rows(int i, int batch) const;

  // Graph-free twins of the blocks above, for gradient-free callers (rollout,
  // evaluation, benchmarking); same arithmetic, no autodiff bookkeeping.
  nn::Tensor feature_row_fast(const core::SystemState& s) const;
  nn::Tensor predict_noise_fast(const nn::Tensor& x, int i, const nn::Tensor& fs) const;

  ActorConfig cfg_;
  DiffusionSchedule sched_;

  nn::Parameter wq_;  // 3 x attention_dim
  nn::Parameter wk_;  // 3 x attention_dim
  nn::Parameter wv_;  // 3 x feature_dim
  nn::DenseNet encoder_;    // dense ablation of the attention block

  nn::DenseNet denoiser_;   // [action + embed + feature] -> action
  nn::DenseNet mean_head_;  // direct ablation of the denoising chain

  nn::Parameter var_w_;  // action_dim x action_dim
  nn::Parameter var_b_;  // 1 x action_dim
};

}  // namespace eat::policy
