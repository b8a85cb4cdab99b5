#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "eat/core/codec.hpp"
#include "eat/env/environment.hpp"
#include "eat/nn/checkpoint.hpp"
#include "eat/trainer/critic.hpp"
#include "eat/trainer/replay_buffer.hpp"
#include "eat/trainer/sac.hpp"

using namespace eat;
using trainer::CriticConfig;
using trainer::ReplayBuffer;
using trainer::SacTrainer;
using trainer::TrainConfig;
using trainer::TwinCritics;

namespace {

core::Experience tagged_experience(double reward) {
  core::Experience e;
  std::vector<core::ServerState> servers(2);
  servers[0].id = 0;
  servers[1].id = 1;
  e.state = core::encode_state(servers, {}, 0.0, 2);
  e.next_state = e.state;
  e.action = {0.1, 0.2, 0.3, 0.4};
  e.reward = reward;
  e.done = false;
  return e;
}

struct TinySetup {
  env::EnvConfig env;
  policy::ActorConfig actor;
  CriticConfig critic;
  TrainConfig train;

  TinySetup() {
    env.cluster_size = 2;
    env.queue_window = 2;
    env.arrival_rate = 0.1;
    env.tasks_per_episode = 4;
    env.time_limit = 256.0;
    env.decision_limit = 16;

    actor.n_servers = 2;
    actor.queue_window = 2;
    actor.attention_dim = 4;
    actor.denoiser_hidden = 8;
    actor.time_embed_dim = 4;
    actor.diffusion.steps = 3;

    critic.n_servers = 2;
    critic.queue_window = 2;
    critic.hidden = 8;

    train.batch_size = 8;
    train.buffer_capacity = 1024;
    train.seed = 5;
  }
};

core::SystemState idle_state() {
  std::vector<core::ServerState> servers(2);
  servers[0].id = 0;
  servers[1].id = 1;
  std::vector<core::Task> queue(1);
  queue[0].id = 1;
  queue[0].parallelism = 2;
  return core::encode_state(servers, queue, 4.0, 2);
}

nn::Checkpoint snapshot_prefixed(nn::NamedParams& named, const std::string& prefix) {
  nn::NamedParams picked;
  for (auto& [name, p] : named) {
    if (name.rfind(prefix, 0) == 0) picked.emplace_back(name, p);
  }
  return nn::snapshot(picked);
}

bool values_equal(const nn::Checkpoint& ck, nn::NamedParams& named, const std::string& prefix) {
  for (auto& [name, p] : named) {
    if (name.rfind(prefix, 0) != 0) continue;
    const nn::Tensor* t = ck.find(name);
    if (t == nullptr) return false;
    for (size_t j = 0; j < p->value.size(); ++j) {
      if (p->value.data()[j] != t->data()[j]) return false;
    }
  }
  return true;
}

}  // namespace

TEST_SUITE("trainer") {

TEST_CASE("the replay buffer overwrites oldest entries once full") {
  ReplayBuffer buf(4);
  CHECK(buf.capacity() == 4);
  for (int i = 0; i < 6; ++i) buf.push(tagged_experience(i));
  CHECK(buf.size() == 4);
  std::set<double> rewards;
  for (size_t i = 0; i < buf.size(); ++i) rewards.insert(buf.at(i).reward);
  CHECK(rewards == std::set<double>{2.0, 3.0, 4.0, 5.0});
  CHECK_THROWS_AS(ReplayBuffer(0), std::invalid_argument);
}

TEST_CASE("sampling is without replacement and seed-deterministic") {
  ReplayBuffer buf(16);
  for (int i = 0; i < 10; ++i) buf.push(tagged_experience(i));

  std::mt19937_64 g(3);
  const auto full = buf.sample(10, g);
  std::set<double> seen;
  for (const auto* e : full) seen.insert(e->reward);
  CHECK(seen.size() == 10);  // every element exactly once

  std::mt19937_64 g1(4);
  std::mt19937_64 g2(4);
  const auto a = buf.sample(4, g1);
  const auto b = buf.sample(4, g2);
  for (size_t i = 0; i < 4; ++i) CHECK(a[i]->reward == b[i]->reward);
  std::set<double> distinct;
  for (const auto* e : a) distinct.insert(e->reward);
  CHECK(distinct.size() == 4);

  CHECK_THROWS_AS((void)buf.sample(11, g), std::invalid_argument);
}

TEST_CASE("twin targets start as exact copies of the live critics") {
  std::mt19937_64 g(9);
  CriticConfig cfg;
  cfg.n_servers = 2;
  cfg.queue_window = 2;
  cfg.hidden = 8;
  TwinCritics tc(cfg, g);
  const auto s = idle_state();
  core::ActionVector a;
  a.exec_gate = 0.3;
  a.steps_fraction = 0.6;
  a.task_prefs = {0.9, 0.1};
  CHECK(tc.q1().value(s, a) == doctest::Approx(tc.target_q1().value(s, a)));
  CHECK(tc.q2().value(s, a) == doctest::Approx(tc.target_q2().value(s, a)));
  // The two live critics are independently initialised.
  CHECK(tc.q1().value(s, a) != doctest::Approx(tc.q2().value(s, a)).epsilon(1e-12));
}

TEST_CASE("soft updates blend live weights into the targets") {
  std::mt19937_64 g(10);
  CriticConfig cfg;
  cfg.n_servers = 2;
  cfg.queue_window = 2;
  cfg.hidden = 4;
  TwinCritics tc(cfg, g);

  nn::NamedParams all;
  tc.collect_all(all);
  nn::Parameter* live = nullptr;
  nn::Parameter* target = nullptr;
  for (auto& [name, p] : all) {
    if (name == "critic/q1/w0") live = p;
    if (name == "critic/target_q1/w0") target = p;
  }
  REQUIRE(live != nullptr);
  REQUIRE(target != nullptr);

  const double old_target = target->value(0, 0);
  live->value(0, 0) = old_target + 2.0;

  tc.soft_update(0.0);  // no-op
  CHECK(target->value(0, 0) == doctest::Approx(old_target));

  tc.soft_update(0.25);
  CHECK(target->value(0, 0) == doctest::Approx(0.25 * (old_target + 2.0) + 0.75 * old_target));

  tc.soft_update(1.0);  // hard copy
  CHECK(target->value(0, 0) == doctest::Approx(live->value(0, 0)));

  CHECK_THROWS_AS(tc.soft_update(1.5), std::invalid_argument);
}

TEST_CASE("state batches flatten exactly like the single-row encoder") {
  CriticConfig cfg;
  cfg.n_servers = 2;
  cfg.queue_window = 2;
  const auto s = idle_state();
  const std::vector<const core::SystemState*> states{&s, &s};
  const nn::Tensor rows = trainer::batch_state_rows(states, cfg);
  REQUIRE(rows.rows() == 2);
  REQUIRE(rows.cols() == cfg.state_dim());
  const nn::Tensor single = policy::state_flat_row(s, cfg.n_servers, cfg.time_scale);
  for (int c = 0; c < rows.cols(); ++c) {
    CHECK(rows(0, c) == doctest::Approx(single(0, c)));
    CHECK(rows(1, c) == doctest::Approx(single(0, c)));
  }
}

TEST_CASE("a critic regression step trains live weights only") {
  TinySetup ts;
  SacTrainer trainer(ts.env, ts.actor, ts.critic, ts.train);

  std::vector<core::Experience> pool;
  for (int i = 0; i < 8; ++i) {
    auto e = tagged_experience(1.0 + 0.1 * i);
    e.done = (i == 7);
    pool.push_back(std::move(e));
  }
  std::vector<const core::Experience*> batch;
  for (const auto& e : pool) batch.push_back(&e);

  nn::NamedParams named = trainer.named_params();
  const nn::Checkpoint before_actor = snapshot_prefixed(named, "actor/");
  const nn::Checkpoint before_targets = snapshot_prefixed(named, "critic/target_");
  const nn::Checkpoint before_live = snapshot_prefixed(named, "critic/q");

  const double loss = trainer.critic_update(batch);
  CHECK(loss >= 0.0);
  CHECK(std::isfinite(loss));

  CHECK(values_equal(before_actor, named, "actor/"));
  CHECK(values_equal(before_targets, named, "critic/target_"));
  CHECK_FALSE(values_equal(before_live, named, "critic/q"));

  CHECK_THROWS_AS((void)trainer.critic_update({}), std::invalid_argument);
}

TEST_CASE("actor ascent climbs an analytic objective") {
  TinySetup ts;
  ts.train.entropy_weight = 0.0;
  ts.train.actor_opt.lr = 0.01;
  ts.train.actor_opt.weight_decay = 0.0;
  SacTrainer trainer(ts.env, ts.actor, ts.critic, ts.train);

  const auto s = idle_state();
  std::vector<const core::SystemState*> states(8, &s);

  // Q(s, a) = -sum_j (a_j - 0.7)^2, maximised when every entry sits at 0.7.
  const SacTrainer::CriticFn peak = [](nn::Graph&, nn::Node*, nn::Node* actions) {
    nn::Node* d = nn::affine(actions, 1.0, -0.7);
    return nn::scale(nn::row_sum(nn::mul(d, d)), -1.0);
  };

  const double first = trainer.actor_update(states, peak);
  double last = first;
  for (int i = 0; i < 299; ++i) last = trainer.actor_update(states, peak);
  CHECK(last > first);

  double mean[4] = {0, 0, 0, 0};
  const int n = 200;
  for (int k = 0; k < n; ++k) {
    const auto a = trainer.actor().act(s, trainer.rng()).flat();
    for (int c = 0; c < 4; ++c) mean[c] += a[static_cast<size_t>(c)];
  }
  for (double& m : mean) m /= n;
  for (int c = 0; c < 4; ++c) CHECK(mean[c] == doctest::Approx(0.7).epsilon(0.18));

  CHECK_THROWS_AS((void)trainer.actor_update({}, peak), std::invalid_argument);
}

TEST_CASE("rollouts store one transition per decision") {
  TinySetup ts;
  SacTrainer trainer(ts.env, ts.actor, ts.critic, ts.train);
  const auto res = trainer.rollout(12);
  CHECK(res.seed == 12);
  CHECK(res.decisions >= 1);
  CHECK(trainer.buffer().size() == static_cast<size_t>(res.decisions));
  CHECK(std::isfinite(res.total_reward));
  CHECK(res.scheduled <= ts.env.tasks_per_episode);
  CHECK(res.completed <= res.scheduled);
  if (res.scheduled > 0) {
    CHECK(res.mean_quality >= 1.8);
    CHECK(res.mean_quality <= 2.7);
    CHECK(res.mean_latency > 0.0);
  }
  // The closing transition carries the terminal flag.
  CHECK(trainer.buffer().at(trainer.buffer().size() - 1).done);
  for (size_t i = 0; i + 1 < trainer.buffer().size(); ++i)
    CHECK_FALSE(trainer.buffer().at(i).done);
}

TEST_CASE("optimisation rounds wait for a full batch") {
  TinySetup ts;
  SacTrainer trainer(ts.env, ts.actor, ts.critic, ts.train);
  CHECK_FALSE(trainer.update().has_value());

  std::uint64_t seed = 100;
  while (trainer.buffer().size() < static_cast<size_t>(ts.train.batch_size)) {
    const bool ready_before =
        trainer.buffer().size() >= static_cast<size_t>(ts.train.batch_size);
    CHECK_FALSE(ready_before);
    (void)trainer.rollout(seed++);
    REQUIRE(seed < 200);  // an episode always adds at least one transition
  }

  const auto stats = trainer.update();
  REQUIRE(stats.has_value());
  CHECK(std::isfinite(stats->critic_loss));
  CHECK(stats->critic_loss >= 0.0);
  CHECK(std::isfinite(stats->actor_objective));
  CHECK(std::isfinite(stats->mean_entropy));
}

TEST_CASE("trainer construction rejects mismatched shapes and bad settings") {
  TinySetup ts;
  auto wrong = ts.actor;
  wrong.queue_window = 3;
  CHECK_THROWS_AS(SacTrainer(ts.env, wrong, ts.critic, ts.train), std::invalid_argument);

  auto bad = ts.train;
  bad.gamma = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ts.train;
  bad.tau = -0.1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ts.train;
  bad.batch_size = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ts.train;
  bad.buffer_capacity = 4;  // smaller than the batch
  bad.batch_size = 8;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

}  // TEST_SUITE
