#include "eat/trainer/sac.hpp"

#include <stdexcept>
#include <vector>

#include "eat/core/codec.hpp"

namespace eat::trainer {

void TrainConfig::validate() const {
  if (episodes < 0) throw std::invalid_argument("episodes must be non-negative");
  if (updates_per_episode < 0)
    throw std::invalid_argument("updates_per_episode must be non-negative");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be positive");
  if (buffer_capacity < static_cast<std::size_t>(batch_size))
    throw std::invalid_argument("buffer capacity must cover one batch");
  if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("gamma must lie in [0, 1]");
  if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("tau must lie in [0, 1]");
  if (entropy_weight < 0.0) throw std::invalid_argument("entropy_weight must be non-negative");
}

namespace {

std::vector<nn::Parameter*> values_only(nn::NamedParams params) {
  std::vector<nn::Parameter*> out;
  out.reserve(params.size());
  for (auto& [name, p] : params) out.push_back(p);
  return out;
}

std::vector<nn::Parameter*> actor_params(policy::Actor& a) {
  nn::NamedParams named;
  a.collect(named);
  return values_only(std::move(named));
}

std::vector<nn::Parameter*> critic_params(TwinCritics& c) {
  nn::NamedParams named;
  c.collect_live(named);
  return values_only(std::move(named));
}

}  // namespace

SacTrainer::SacTrainer(const env::EnvConfig& env_cfg, const policy::ActorConfig& actor_cfg,
                       const CriticConfig& critic_cfg, const TrainConfig& cfg)
    : env_cfg_(env_cfg),
      cfg_(cfg),
      g_(cfg.seed),
      actor_(actor_cfg, g_),
      critics_(critic_cfg, g_),
      buffer_(cfg.buffer_capacity),
      actor_opt_(actor_params(actor_), cfg.actor_opt),
      critic_opt_(critic_params(critics_), cfg.critic_opt) {
  cfg_.validate();
  env_cfg_.validate();
  if (actor_cfg.n_servers != critic_cfg.n_servers ||
      actor_cfg.queue_window != critic_cfg.queue_window)
    throw std::invalid_argument("actor and critic observe different shapes");
  if (actor_cfg.n_servers != env_cfg.cluster_size ||
      actor_cfg.queue_window != env_cfg.queue_window)
    throw std::invalid_argument("policy shape does not match the environment");
}

EpisodeResult SacTrainer::rollout(std::uint64_t seed) {
  env::Environment env(env_cfg_);
  core::SystemState state = env.reset(seed);
  EpisodeResult res;
  res.seed = seed;
  while (!env.done()) {
    const core::ActionVector av = actor_.act(state, g_);
    const core::Decision d =
        core::decode_action(av, env.visible_queue_len(), env_cfg_.steps_min, env_cfg_.steps_max);
    const env::StepOutcome out = env.step(d);
    buffer_.push({state, av.flat(), out.reward, out.state, out.done});
    res.total_reward += out.reward;
    ++res.decisions;
    state = out.state;
  }
  const auto& log = env.schedule_log();
  res.scheduled = static_cast<int>(log.size());
  res.completed = env.completed_count();
  if (!log.empty()) {
    double lat = 0.0, qual = 0.0;
    for (const auto& s : log) {
      lat += s.response();
      qual += s.quality;
    }
    res.mean_latency = lat / static_cast<double>(log.size());
    res.mean_quality = qual / static_cast<double>(log.size());
  }
  return res;
}

std::optional<UpdateStats> SacTrainer::update() {
  if (buffer_.size() < static_cast<std::size_t>(cfg_.batch_size)) return std::nullopt;
  const auto batch = buffer_.sample(static_cast<std::size_t>(cfg_.batch_size), g_);

  UpdateStats st;
  st.critic_loss = critic_update(batch);

  std::vector<const core::SystemState*> states;
  states.reserve(batch.size());
  for (const auto* e : batch) states.push_back(&e->state);
  st.actor_objective = actor_update(
      states,
      [this](nn::Graph& g, nn::Node* s, nn::Node* a) { return critics_.min_live(g, s, a); },
      &st.mean_entropy);

  critics_.soft_update(cfg_.tau);
  return st;
}

double SacTrainer::critic_update(std::span<const core::Experience* const> batch) {
  if (batch.empty()) throw std::invalid_argument("empty critic batch");
  const CriticConfig& ccfg = critics_.config();
  const int B = static_cast<int>(batch.size());

  nn::Tensor actions(B, ccfg.action_dim());
  nn::Tensor rewards(B, 1);
  nn::Tensor carry(B, 1);  // 0 where the transition ended the episode
  std::vector<const core::SystemState*> states, next_states;
  states.reserve(batch.size());
  next_states.reserve(batch.size());
  for (int b = 0; b < B; ++b) {
    const core::Experience& e = *batch[static_cast<std::size_t>(b)];
    if (static_cast<int>(e.action.size()) != ccfg.action_dim())
      throw std::invalid_argument("stored action width does not match the critic");
    for (int c = 0; c < ccfg.action_dim(); ++c) actions(b, c) = e.action[static_cast<std::size_t>(c)];
    rewards(b, 0) = e.reward;
    carry(b, 0) = e.done ? 0.0 : 1.0;
    states.push_back(&e.state);
    next_states.push_back(&e.next_state);
  }

  // Bootstrap values. backward() is never called on this graph, so nothing
  // here can perturb actor or target weights.
  nn::Tensor y(B, 1);
  {
    nn::Graph tg;
    const auto noises = actor_.draw_noises(B, g_);
    const auto next_a = actor_.sample(tg, next_states, noises);
    nn::Node* ns_rows = tg.constant(batch_state_rows(next_states, ccfg));
    nn::Node* tq = critics_.min_target(tg, ns_rows, next_a.action);
    for (int b = 0; b < B; ++b)
      y(b, 0) = rewards(b, 0) + cfg_.gamma * carry(b, 0) * tq->value(b, 0);
  }

  critic_opt_.zero_grad();
  nn::Graph g;
  nn::Node* s_rows = g.constant(batch_state_rows(states, ccfg));
  nn::Node* a_rows = g.constant(actions);
  nn::Node* target = g.constant(y);
  nn::Node* d1 = nn::sub(critics_.q1().forward(g, s_rows, a_rows), target);
  nn::Node* d2 = nn::sub(critics_.q2().forward(g, s_rows, a_rows), target);
  nn::Node* loss = nn::add(nn::mean_all(nn::mul(d1, d1)), nn::mean_all(nn::mul(d2, d2)));
  g.backward(loss);
  critic_opt_.step();
  return loss->value(0, 0);
}

double SacTrainer::actor_update(std::span<const core::SystemState* const> states,
                                const CriticFn& critic_fn, double* mean_entropy) {
  if (states.empty()) throw std::invalid_argument("empty actor batch");
  actor_opt_.zero_grad();
  nn::Graph g;
  const auto noises = actor_.draw_noises(static_cast<int>(states.size()), g_);
  const auto smp = actor_.sample(g, states, noises);
  nn::Node* s_rows = g.constant(batch_state_rows(states, critics_.config()));
  nn::Node* q = critic_fn(g, s_rows, smp.action);
  nn::Node* objective =
      nn::mean_all(nn::add(q, nn::scale(smp.entropy, cfg_.entropy_weight)));
  g.backward(nn::scale(objective, -1.0));
  actor_opt_.step();
  if (mean_entropy != nullptr) {
    double h = 0.0;
    for (int b = 0; b < smp.entropy->value.rows(); ++b) h += smp.entropy->value(b, 0);
    *mean_entropy = h / smp.entropy->value.rows();
  }
  return objective->value(0, 0);
}

nn::NamedParams SacTrainer::named_params() {
  nn::NamedParams out;
  actor_.collect(out);
  critics_.collect_all(out);
  return out;
}

}  // namespace eat::trainer
