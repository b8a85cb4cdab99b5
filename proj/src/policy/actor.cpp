#include "eat/policy/actor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "eat/core/rng.hpp"

namespace eat::policy {

void ActorConfig::validate() const {
  if (n_servers < 1) throw std::invalid_argument("actor needs at least one server column");
  if (queue_window < 1) throw std::invalid_argument("actor needs at least one queue slot");
  if (attention_dim < 1) throw std::invalid_argument("attention_dim must be positive");
  if (encoder_hidden < 1 || denoiser_hidden < 1)
    throw std::invalid_argument("hidden widths must be positive");
  if (time_embed_dim < 2 || time_embed_dim % 2 != 0)
    throw std::invalid_argument("time_embed_dim must be a positive even number");
  if (!(time_scale > 0.0)) throw std::invalid_argument("time_scale must be positive");
  if (logvar_min > logvar_max) throw std::invalid_argument("logvar bounds are inverted");
  diffusion.validate();
}

nn::Tensor state_tokens(const core::SystemState& s, int n_servers, double time_scale) {
  if (s.cols() < n_servers)
    throw std::invalid_argument("state has fewer columns than servers");
  nn::Tensor t(s.cols(), 3);
  for (int j = 0; j < s.cols(); ++j) {
    double v0 = s.at(0, j);
    double v1 = s.at(1, j);
    if (j < n_servers)
      v1 /= time_scale;  // remaining busy time
    else
      v0 /= time_scale;  // waiting time
    t(j, 0) = v0;
    t(j, 1) = v1;
    t(j, 2) = s.at(2, j);
  }
  return t;
}

nn::Tensor state_flat_row(const core::SystemState& s, int n_servers, double time_scale) {
  const nn::Tensor tok = state_tokens(s, n_servers, time_scale);
  nn::Tensor r(1, 3 * s.cols());
  for (int row = 0; row < 3; ++row)
    for (int j = 0; j < s.cols(); ++j) r(0, row * s.cols() + j) = tok(j, row);
  return r;
}

Actor::Actor(const ActorConfig& cfg, std::mt19937_64& g) : cfg_(cfg), sched_(cfg.diffusion) {
  cfg_.validate();
  const int F = cfg_.feature_dim();
  const int A = cfg_.action_dim();
  if (cfg_.use_attention) {
    wq_ = nn::Parameter(nn::Tensor(3, cfg_.attention_dim));
    wk_ = nn::Parameter(nn::Tensor(3, cfg_.attention_dim));
    wv_ = nn::Parameter(nn::Tensor(3, F));
    nn::init_uniform_fan_in(wq_.value, 3, g);
    nn::init_uniform_fan_in(wk_.value, 3, g);
    nn::init_uniform_fan_in(wv_.value, 3, g);
  } else {
    encoder_ = nn::DenseNet({3 * F, cfg_.encoder_hidden, F}, nn::Activation::Mish,
                            nn::Activation::Identity, g);
  }
  if (cfg_.use_diffusion) {
    denoiser_ =
        nn::DenseNet({A + cfg_.time_embed_dim + F, cfg_.denoiser_hidden, cfg_.denoiser_hidden, A},
                     nn::Activation::Mish, nn::Activation::Tanh, g);
  } else {
    mean_head_ = nn::DenseNet({F, cfg_.denoiser_hidden, cfg_.denoiser_hidden, A},
                              nn::Activation::Mish, nn::Activation::Tanh, g);
  }
  var_w_ = nn::Parameter(nn::Tensor(A, A));
  nn::init_uniform_fan_in(var_w_.value, A, g);
  var_b_ = nn::Parameter(nn::Tensor(1, A, cfg_.logvar_bias_init));
}

Actor::NoiseSet Actor::draw_noises(int batch, std::mt19937_64& g) const {
  if (batch < 1) throw std::invalid_argument("noise batch must be positive");
  const int A = cfg_.action_dim();
  const auto fill_normal = [&g](nn::Tensor& t) {
    for (auto& v : t.vec()) v = core::rng::normal(g);
  };
  NoiseSet ns;
  ns.x_init = nn::Tensor(batch, A);
  fill_normal(ns.x_init);
  if (cfg_.use_diffusion) {
    ns.step_noise.reserve(static_cast<std::size_t>(std::max(0, sched_.steps() - 1)));
    for (int i = sched_.steps(); i >= 2; --i) {
      nn::Tensor n(batch, A);
      fill_normal(n);
      ns.step_noise.push_back(std::move(n));
    }
  }
  ns.head_noise = nn::Tensor(batch, A);
  fill_normal(ns.head_noise);
  return ns;
}

nn::Node* Actor::feature_row(nn::Graph& g, const core::SystemState& s) {
  if (s.cols() != cfg_.feature_dim())
    throw std::invalid_argument("state column count does not match actor configuration");
  if (cfg_.use_attention) {
    nn::Node* tok = g.constant(state_tokens(s, cfg_.n_servers, cfg_.time_scale));
    nn::Node* q = nn::matmul(tok, g.param(wq_));
    nn::Node* k = nn::matmul(tok, g.param(wk_));
    nn::Node* v = nn::matmul(tok, g.param(wv_));
    return nn::mean_rows(nn::scaled_dot_attention(q, k, v));
  }
  return encoder_.forward(g, g.constant(state_flat_row(s, cfg_.n_servers, cfg_.time_scale)));
}

nn::Node* Actor::features(nn::Graph& g, std::span<const core::SystemState* const> states) {
  if (states.empty()) throw std::invalid_argument("empty state batch");
  std::vector<nn::Node*> rows;
  rows.reserve(states.size());
  for (const auto* s : states) rows.push_back(feature_row(g, *s));
  return nn::stack_rows(rows);
}

nn::Tensor Actor::time_embedding_rows(int i, int batch) const {
  const int D = cfg_.time_embed_dim;
  nn::Tensor t(batch, D);
  for (int k = 0; k < D / 2; ++k) {
    const double freq = std::pow(10000.0, -2.0 * k / D);
    const double sv = std::sin(i * freq);
    const double cv = std::cos(i * freq);
    for (int b = 0; b < batch; ++b) {
      t(b, 2 * k) = sv;
      t(b, 2 * k + 1) = cv;
    }
  }
  return t;
}

nn::Node* Actor::predict_noise(nn::Graph& g, nn::Node* x, int i, nn::Node* fs) {
  nn::Node* emb = g.constant(time_embedding_rows(i, x->value.rows()));
  const std::array<nn::Node*, 3> parts{x, emb, fs};
  return denoiser_.forward(g, nn::concat_cols(parts));
}

nn::Node* Actor::reverse_mean(nn::Graph& g, nn::Node* x, int i, nn::Node* fs) {
  nn::Node* eps = predict_noise(g, x, i, fs);
  return nn::sub(nn::scale(x, 1.0 / std::sqrt(sched_.alpha(i))),
                 nn::scale(eps, sched_.beta(i) / std::sqrt(1.0 - sched_.alpha_bar(i))));
}

nn::Node* Actor::recover_x0(nn::Graph& g, nn::Node* x1, nn::Node* fs) {
  nn::Node* eps = predict_noise(g, x1, 1, fs);
  const double abar1 = sched_.alpha_bar(1);
  if (cfg_.x0_form == X0Form::TanhResidual) {
    return nn::sub(nn::scale(x1, 1.0 / std::sqrt(abar1)),
                   nn::scale(nn::tanh_op(eps), 1.0 / std::sqrt(sched_.alpha_bar(0))));
  }
  return nn::scale(nn::sub(x1, nn::scale(eps, std::sqrt(1.0 - abar1))), 1.0 / std::sqrt(abar1));
}

Actor::Sample Actor::sample(nn::Graph& g, std::span<const core::SystemState* const> states,
                            const NoiseSet& noises) {
  const int batch = static_cast<int>(states.size());
  if (noises.x_init.rows() != batch || noises.head_noise.rows() != batch)
    throw std::invalid_argument("noise batch does not match state batch");
  nn::Node* fs = features(g, states);

  nn::Node* x0 = nullptr;
  if (cfg_.use_diffusion) {
    if (static_cast<int>(noises.step_noise.size()) != std::max(0, sched_.steps() - 1))
      throw std::invalid_argument("wrong number of chain noise tensors");
    nn::Node* x = g.constant(noises.x_init);
    std::size_t idx = 0;
    for (int i = sched_.steps(); i >= 2; --i, ++idx) {
      nn::Node* mu = reverse_mean(g, x, i, fs);
      const double sd = std::sqrt(sched_.posterior_variance(i));
      nn::Tensor scaled = noises.step_noise[idx];
      for (auto& v : scaled.vec()) v *= sd;
      x = nn::add(mu, g.constant(std::move(scaled)));
    }
    x0 = recover_x0(g, x, fs);
  } else {
    x0 = mean_head_.forward(g, fs);
  }

  nn::Node* logvar = nn::clamp(nn::add_rowvec(nn::matmul(x0, g.param(var_w_)), g.param(var_b_)),
                               cfg_.logvar_min, cfg_.logvar_max);
  nn::Node* sigma = nn::exp_op(nn::scale(logvar, 0.5));
  nn::Node* pre = nn::add(x0, nn::mul(sigma, g.constant(noises.head_noise)));
  nn::Node* action = nn::affine(nn::tanh_op(pre), 0.5, 0.5);
  const double ent_shift =
      0.5 * cfg_.action_dim() * std::log(2.0 * std::numbers::pi * std::numbers::e);
  nn::Node* entropy = nn::affine(nn::row_sum(logvar), 0.5, ent_shift);

  Sample out;
  out.action = action;
  out.pre_squash = pre;
  out.x0 = x0;
  out.logvar = logvar;
  out.entropy = entropy;
  return out;
}

nn::Tensor Actor::feature_row_fast(const core::SystemState& s) const {
  if (s.cols() != cfg_.feature_dim())
    throw std::invalid_argument("state column count does not match actor configuration");
  if (cfg_.use_attention) {
    const nn::Tensor tok = state_tokens(s, cfg_.n_servers, cfg_.time_scale);
    const nn::Tensor att = nn::attention_forward(
        nn::matmul(tok, wq_.value), nn::matmul(tok, wk_.value), nn::matmul(tok, wv_.value));
    nn::Tensor out(1, att.cols());
    for (int c = 0; c < att.cols(); ++c) {
      double sum = 0.0;
      for (int r = 0; r < att.rows(); ++r) sum += att(r, c);
      out(0, c) = sum / att.rows();
    }
    return out;
  }
  return encoder_.predict(state_flat_row(s, cfg_.n_servers, cfg_.time_scale));
}

nn::Tensor Actor::predict_noise_fast(const nn::Tensor& x, int i, const nn::Tensor& fs) const {
  const nn::Tensor emb = time_embedding_rows(i, x.rows());
  nn::Tensor in(x.rows(), x.cols() + emb.cols() + fs.cols());
  for (int r = 0; r < x.rows(); ++r) {
    int c = 0;
    for (int j = 0; j < x.cols(); ++j) in(r, c++) = x(r, j);
    for (int j = 0; j < emb.cols(); ++j) in(r, c++) = emb(r, j);
    for (int j = 0; j < fs.cols(); ++j) in(r, c++) = fs(0, j);
  }
  return denoiser_.predict(in);
}

core::ActionVector Actor::act(const core::SystemState& s, std::mt19937_64& g) {
  const NoiseSet ns = draw_noises(1, g);
  const nn::Tensor fs = feature_row_fast(s);
  const int A = cfg_.action_dim();

  nn::Tensor x0;
  if (cfg_.use_diffusion) {
    nn::Tensor x = ns.x_init;
    std::size_t idx = 0;
    for (int i = sched_.steps(); i >= 2; --i, ++idx) {
      const nn::Tensor eps = predict_noise_fast(x, i, fs);
      const double mu_x = 1.0 / std::sqrt(sched_.alpha(i));
      const double mu_eps = sched_.beta(i) / std::sqrt(1.0 - sched_.alpha_bar(i));
      const double sd = std::sqrt(sched_.posterior_variance(i));
      for (int c = 0; c < A; ++c)
        x(0, c) = x(0, c) * mu_x - eps(0, c) * mu_eps + sd * ns.step_noise[idx](0, c);
    }
    const nn::Tensor eps = predict_noise_fast(x, 1, fs);
    const double abar1 = sched_.alpha_bar(1);
    x0 = nn::Tensor(1, A);
    if (cfg_.x0_form == X0Form::TanhResidual) {
      const double inv_sq0 = 1.0 / std::sqrt(sched_.alpha_bar(0));
      for (int c = 0; c < A; ++c)
        x0(0, c) = x(0, c) / std::sqrt(abar1) - std::tanh(eps(0, c)) * inv_sq0;
    } else {
      for (int c = 0; c < A; ++c)
        x0(0, c) = (x(0, c) - std::sqrt(1.0 - abar1) * eps(0, c)) / std::sqrt(abar1);
    }
  } else {
    x0 = mean_head_.predict(fs);
  }

  const nn::Tensor lv = nn::matmul(x0, var_w_.value);
  std::vector<double> flat(static_cast<std::size_t>(A));
  for (int c = 0; c < A; ++c) {
    const double logvar =
        std::clamp(lv(0, c) + var_b_.value(0, c), cfg_.logvar_min, cfg_.logvar_max);
    const double pre = x0(0, c) + std::exp(0.5 * logvar) * ns.head_noise(0, c);
    flat[static_cast<std::size_t>(c)] = 0.5 * std::tanh(pre) + 0.5;
  }
  return core::ActionVector::from_flat(flat);
}

nn::Tensor Actor::reverse_step(const nn::Tensor& x, int i, const core::SystemState& s,
                               std::mt19937_64& g) {
  if (i < 1 || i > sched_.steps()) throw std::invalid_argument("chain index out of range");
  nn::Graph graph;
  const core::SystemState* ptr = &s;
  nn::Node* fs = features(graph, {&ptr, 1});
  nn::Node* mu = reverse_mean(graph, graph.constant(x), i, fs);
  nn::Tensor out = mu->value;
  const double sd = std::sqrt(sched_.posterior_variance(i));
  if (sd > 0.0)
    for (auto& v : out.vec()) v += sd * core::rng::normal(g);
  return out;
}

nn::Tensor Actor::denoised_x0(const nn::Tensor& x, const core::SystemState& s) {
  nn::Graph graph;
  const core::SystemState* ptr = &s;
  nn::Node* fs = features(graph, {&ptr, 1});
  return recover_x0(graph, graph.constant(x), fs)->value;
}

void Actor::collect(nn::NamedParams& out) {
  if (cfg_.use_attention) {
    out.emplace_back("actor/attn/wq", &wq_);
    out.emplace_back("actor/attn/wk", &wk_);
    out.emplace_back("actor/attn/wv", &wv_);
  } else {
    encoder_.collect("actor/encoder", out);
  }
  if (cfg_.use_diffusion)
    denoiser_.collect("actor/denoiser", out);
  else
    mean_head_.collect("actor/mean", out);
  out.emplace_back("actor/var/w", &var_w_);
  out.emplace_back("actor/var/b", &var_b_);
}

}  // namespace eat::policy
