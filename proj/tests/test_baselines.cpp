#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "eat/baselines/genetic.hpp"
#include "eat/baselines/greedy.hpp"
#include "eat/baselines/harmony.hpp"
#include "eat/baselines/random_agent.hpp"
#include "eat/baselines/sequence.hpp"
#include "eat/env/environment.hpp"

using namespace eat;
using namespace eat::baselines;

namespace {

env::EnvConfig tiny_env() {
  env::EnvConfig cfg;
  cfg.cluster_size = 2;
  cfg.queue_window = 2;
  cfg.arrival_rate = 0.1;
  cfg.tasks_per_episode = 3;
  cfg.time_limit = 256.0;
  cfg.decision_limit = 8;
  return cfg;
}

struct TempPath {
  std::filesystem::path path;
  explicit TempPath(const std::string& name)
      : path(std::filesystem::temp_directory_path() / name) {}
  ~TempPath() { std::error_code ec; std::filesystem::remove(path, ec); }
};

}  // namespace

TEST_SUITE("baselines") {

TEST_CASE("greedy lookahead lands on the quality plateau") {
  env::EnvConfig cfg;  // 4 servers, default models
  env::Environment env(cfg);
  env.reset({{0.0, 2}});
  GreedyAgent agent;
  CHECK(agent.name() == "greedy");
  const auto d = agent.decide(env);
  REQUIRE(d.is_schedule());
  CHECK(d.task_index == 0);
  // With a floored latency bonus the payoff ties across 25..27 steps; the
  // enumeration keeps the earliest.
  CHECK(d.steps == 25);
  const auto out = env.step(d);
  CHECK(out.reward == doctest::Approx(2.7 + 1.0 / 0.4));
}

TEST_CASE("greedy idles when there is nothing worth doing") {
  env::EnvConfig cfg;
  env::Environment env(cfg);
  env.reset({{5.0, 1}});
  GreedyAgent agent;
  CHECK(agent.decide(env).is_schedule() == false);  // queue still empty

  env.reset({{0.0, 4}, {0.5, 2}});
  (void)env.step(core::Decision::schedule(0, 20));  // gang takes every server
  REQUIRE(env.visible_queue_len() == 1);
  CHECK(agent.decide(env).is_schedule() == false);  // scheduling now would be infeasible
}

TEST_CASE("greedy exploits a reusable idle group") {
  env::EnvConfig cfg;
  env::Environment env(cfg);
  env.reset({{0.0, 2}, {0.0, 2}});
  (void)env.step(core::Decision::schedule(0, 20));
  GreedyAgent agent;
  const auto d = agent.decide(env);
  REQUIRE(d.is_schedule());
  CHECK(d.steps == 25);  // with zero init the plateau peak is unique
  const auto out = env.step(d);
  REQUIRE(out.scheduled.has_value());
  CHECK(out.scheduled->reuse);
  CHECK(out.scheduled->init == doctest::Approx(0.0));
}

TEST_CASE("random decisions are valid, reproducible, and mixed") {
  env::EnvConfig cfg;
  env::Environment env(cfg);
  env.reset({{0.0, 1}, {0.0, 2}, {0.0, 1}});

  RandomAgent a(77);
  RandomAgent b(77);
  int noops = 0;
  int schedules = 0;
  for (int k = 0; k < 50; ++k) {
    const auto da = a.decide(env);
    const auto db = b.decide(env);
    CHECK(da.is_schedule() == db.is_schedule());
    if (da.is_schedule()) {
      CHECK(da.task_index == db.task_index);
      CHECK(da.steps == db.steps);
      CHECK(da.task_index >= 0);
      CHECK(da.task_index < env.visible_queue_len());
      CHECK(da.steps >= cfg.steps_min);
      CHECK(da.steps <= cfg.steps_max);
      ++schedules;
    } else {
      ++noops;
    }
    for (double v : a.last_action().flat()) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
  CHECK(noops >= 5);      // the gate idles about half the time
  CHECK(schedules >= 5);
}

TEST_CASE("action sequences flatten and round-trip through disk") {
  ActionSequence seq;
  seq.queue_window = 2;
  core::ActionVector v1;
  v1.exec_gate = 0.1;
  v1.steps_fraction = 0.9;
  v1.task_prefs = {0.8, 0.2};
  core::ActionVector v2;
  v2.exec_gate = 0.7;
  v2.steps_fraction = 0.3;
  v2.task_prefs = {0.4, 0.6};
  seq.actions = {v1, v2};

  const auto flat = seq.flatten();
  REQUIRE(flat.size() == 8);
  CHECK(flat[0] == doctest::Approx(0.1));
  CHECK(flat[5] == doctest::Approx(0.3));
  const auto back = ActionSequence::unflatten(flat, 2);
  REQUIRE(back.actions.size() == 2);
  CHECK(back.actions[1].task_prefs[1] == doctest::Approx(0.6));
  CHECK_THROWS_AS((void)ActionSequence::unflatten(std::vector<double>(7, 0.5), 2),
                  std::invalid_argument);

  TempPath tmp("eat_test_sequence.json");
  seq.save_file(tmp.path.string());
  const auto loaded = ActionSequence::load_file(tmp.path.string());
  REQUIRE(loaded.actions.size() == 2);
  CHECK(loaded.queue_window == 2);
  CHECK(loaded.actions[0].steps_fraction == doctest::Approx(0.9));
  CHECK(loaded.actions[1].task_prefs[0] == doctest::Approx(0.4));
  CHECK_THROWS_AS((void)ActionSequence::load_file("/nonexistent/nowhere.json"),
                  std::runtime_error);
}

TEST_CASE("a sequence agent replays its plan and then idles") {
  env::EnvConfig cfg = tiny_env();
  env::Environment env(cfg);
  env.reset({{0.0, 1}});

  ActionSequence seq;
  seq.queue_window = 2;
  core::ActionVector go;
  go.exec_gate = 0.0;  // act
  go.steps_fraction = 1.0;
  go.task_prefs = {1.0, 0.0};
  seq.actions = {go};

  SequenceAgent agent(seq, "plan");
  CHECK(agent.name() == "plan");
  const auto first = agent.decide(env);
  REQUIRE(first.is_schedule());
  CHECK(first.task_index == 0);
  CHECK(first.steps == cfg.steps_max);
  CHECK(agent.decide(env).is_schedule() == false);  // plan exhausted
  agent.rewind();
  CHECK(agent.decide(env).is_schedule());
}

TEST_CASE("episode reward playback is deterministic") {
  const env::EnvConfig cfg = tiny_env();
  ActionSequence seq;
  seq.queue_window = cfg.queue_window;
  core::ActionVector go;
  go.exec_gate = 0.0;
  go.steps_fraction = 0.5;
  go.task_prefs = {1.0, 0.0};
  seq.actions.assign(8, go);
  const double r1 = episode_reward(cfg, seq, 42);
  const double r2 = episode_reward(cfg, seq, 42);
  CHECK(r1 == doctest::Approx(r2));
  CHECK(r1 > 0.0);  // it schedules at least one task on this seed
}

TEST_CASE("genetic search improves monotonically and reproducibly") {
  const env::EnvConfig env_cfg = tiny_env();
  GeneticConfig cfg;
  cfg.population = 6;
  cfg.generations = 4;
  cfg.parents = 3;
  cfg.tournament = 2;
  cfg.sequence_length = 4;
  cfg.seed = 2;
  cfg.episode_seed = 3;

  const auto res = optimize_genetic(env_cfg, cfg);
  REQUIRE(res.history.size() == 5);  // initial best plus one entry per generation
  for (size_t i = 1; i < res.history.size(); ++i) CHECK(res.history[i] >= res.history[i - 1]);
  CHECK(res.best_reward == doctest::Approx(res.history.back()));
  // The reported champion actually earns its score when replayed.
  CHECK(episode_reward(env_cfg, res.best, cfg.episode_seed) == doctest::Approx(res.best_reward));

  const auto again = optimize_genetic(env_cfg, cfg);
  CHECK(again.best_reward == doctest::Approx(res.best_reward));
  REQUIRE(again.history.size() == res.history.size());
  for (size_t i = 0; i < res.history.size(); ++i)
    CHECK(again.history[i] == doctest::Approx(res.history[i]));

  GeneticConfig bad = cfg;
  bad.parents = 10;  // larger than the population
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.mutation_rate = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("harmony search improves monotonically and reproducibly") {
  const env::EnvConfig env_cfg = tiny_env();
  HarmonyConfig cfg;
  cfg.memory = 6;
  cfg.improvisations = 8;
  cfg.sequence_length = 4;
  cfg.seed = 4;
  cfg.episode_seed = 3;

  const auto res = optimize_harmony(env_cfg, cfg);
  REQUIRE(res.history.size() == 9);  // initial best plus one entry per improvisation
  for (size_t i = 1; i < res.history.size(); ++i) CHECK(res.history[i] >= res.history[i - 1]);
  CHECK(res.best_reward == doctest::Approx(res.history.back()));
  CHECK(episode_reward(env_cfg, res.best, cfg.episode_seed) == doctest::Approx(res.best_reward));

  const auto again = optimize_harmony(env_cfg, cfg);
  CHECK(again.best_reward == doctest::Approx(res.best_reward));

  HarmonyConfig bad = cfg;
  bad.consider_rate = 1.2;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.bandwidth = -0.1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("optimized plans beat random initialisation on their own seed") {
  const env::EnvConfig env_cfg = tiny_env();
  GeneticConfig cfg;
  cfg.population = 8;
  cfg.generations = 6;
  cfg.parents = 4;
  cfg.tournament = 2;
  cfg.sequence_length = 8;
  cfg.seed = 11;
  cfg.episode_seed = 7;
  const auto res = optimize_genetic(env_cfg, cfg);
  // The search must at least improve on the initial random best.
  CHECK(res.history.back() >= res.history.front());
  CHECK(res.best_reward > 0.0);
}

}  // TEST_SUITE
