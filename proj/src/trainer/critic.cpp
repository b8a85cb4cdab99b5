#include "eat/trainer/critic.hpp"

#include <array>
#include <stdexcept>

#include "eat/policy/actor.hpp"

namespace eat::trainer {

void CriticConfig::validate() const {
  if (n_servers < 1 || queue_window < 1)
    throw std::invalid_argument("critic needs positive state dimensions");
  if (hidden < 1) throw std::invalid_argument("critic hidden width must be positive");
  if (!(time_scale > 0.0)) throw std::invalid_argument("time_scale must be positive");
}

Critic::Critic(const CriticConfig& cfg, std::mt19937_64& g) : cfg_(cfg) {
  cfg.validate();
  net_ = nn::DenseNet({cfg.state_dim() + cfg.action_dim(), cfg.hidden, cfg.hidden, 1},
                      nn::Activation::Mish, nn::Activation::Identity, g);
}

nn::Node* Critic::forward(nn::Graph& g, nn::Node* states, nn::Node* actions) {
  if (states->value.rows() != actions->value.rows())
    throw std::invalid_argument("state/action batch mismatch");
  const std::array<nn::Node*, 2> parts{states, actions};
  return net_.forward(g, nn::concat_cols(parts));
}

double Critic::value(const core::SystemState& s, const core::ActionVector& a) {
  nn::Graph g;
  nn::Node* sn = g.constant(policy::state_flat_row(s, cfg_.n_servers, cfg_.time_scale));
  nn::Node* an = g.constant(nn::Tensor::row(a.flat()));
  return forward(g, sn, an)->value(0, 0);
}

void Critic::collect(const std::string& prefix, nn::NamedParams& out) {
  net_.collect(prefix, out);
}

TwinCritics::TwinCritics(const CriticConfig& cfg, std::mt19937_64& g)
    : cfg_(cfg), q1_(cfg, g), q2_(cfg, g), target_q1_(q1_), target_q2_(q2_) {}

nn::Node* TwinCritics::min_live(nn::Graph& g, nn::Node* states, nn::Node* actions) {
  return nn::minimum(q1_.forward(g, states, actions), q2_.forward(g, states, actions));
}

nn::Node* TwinCritics::min_target(nn::Graph& g, nn::Node* states, nn::Node* actions) {
  return nn::minimum(target_q1_.forward(g, states, actions),
                     target_q2_.forward(g, states, actions));
}

void TwinCritics::soft_update(double tau) {
  if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("tau must lie in [0, 1]");
  nn::NamedParams live, target;
  q1_.collect("q1", live);
  q2_.collect("q2", live);
  target_q1_.collect("q1", target);
  target_q2_.collect("q2", target);
  for (std::size_t i = 0; i < live.size(); ++i) {
    auto& tv = target[i].second->value;
    const auto& lv = live[i].second->value;
    for (std::size_t j = 0; j < tv.size(); ++j)
      tv.vec()[j] = tau * lv.vec()[j] + (1.0 - tau) * tv.vec()[j];
  }
}

void TwinCritics::collect_live(nn::NamedParams& out) {
  q1_.collect("critic/q1", out);
  q2_.collect("critic/q2", out);
}

void TwinCritics::collect_all(nn::NamedParams& out) {
  collect_live(out);
  target_q1_.collect("critic/target_q1", out);
  target_q2_.collect("critic/target_q2", out);
}

nn::Tensor batch_state_rows(std::span<const core::SystemState* const> states,
                            const CriticConfig& cfg) {
  if (states.empty()) throw std::invalid_argument("empty state batch");
  nn::Tensor out(static_cast<int>(states.size()), cfg.state_dim());
  for (std::size_t b = 0; b < states.size(); ++b) {
    const nn::Tensor row = policy::state_flat_row(*states[b], cfg.n_servers, cfg.time_scale);
    for (int c = 0; c < cfg.state_dim(); ++c) out(static_cast<int>(b), c) = row(0, c);
  }
  return out;
}

}  // namespace eat::trainer
