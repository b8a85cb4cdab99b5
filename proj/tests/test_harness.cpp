#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "eat/env/scenario.hpp"
#include "eat/harness/agent_factory.hpp"
#include "eat/harness/bench.hpp"
#include "eat/harness/config.hpp"
#include "eat/harness/metrics.hpp"
#include "eat/harness/replay_run.hpp"
#include "eat/harness/run_dir.hpp"
#include "eat/nn/checkpoint.hpp"

using namespace eat;
using namespace eat::harness;

namespace {

const std::string kFixtures = EAT_FIXTURE_DIR;

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& name)
      : path(std::filesystem::temp_directory_path() / name) {}
  ~TempFile() { std::error_code ec; std::filesystem::remove(path, ec); }
  std::string str() const { return path.string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig tiny_run_config(const std::string& agent) {
  RunConfig cfg;
  cfg.agent = agent;
  cfg.env.cluster_size = 2;
  cfg.env.queue_window = 2;
  cfg.env.arrival_rate = 0.1;
  cfg.env.tasks_per_episode = 3;
  cfg.env.time_limit = 256.0;
  cfg.env.decision_limit = 16;
  cfg.actor.attention_dim = 4;
  cfg.actor.denoiser_hidden = 8;
  cfg.actor.encoder_hidden = 8;
  cfg.actor.time_embed_dim = 4;
  cfg.actor.diffusion.steps = 2;
  cfg.critic.hidden = 8;
  cfg.eval_episodes = 2;
  cfg.eval_seed = 50;
  cfg.sync_shapes();
  return cfg;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("every setting survives a dump-and-reapply round trip") {
  RunConfig base;
  const auto dumped = dump_settings(base);
  CHECK(dumped.size() > 40);  // the whole surface is exposed

  RunConfig rebuilt;
  for (const auto& [key, value] : dumped) apply_setting(rebuilt, key, value);
  const auto again = dump_settings(rebuilt);
  REQUIRE(again.size() == dumped.size());
  for (size_t i = 0; i < dumped.size(); ++i) {
    CHECK(again[i].first == dumped[i].first);
    CHECK(again[i].second == dumped[i].second);
  }
}

TEST_CASE("edited settings round trip with exact values") {
  RunConfig cfg;
  apply_setting_line(cfg, "agent=greedy");
  apply_setting_line(cfg, "env.cluster_size=8");
  apply_setting_line(cfg, "env.arrival_rate=0.15");
  apply_setting_line(cfg, "env.parallelism_weights=0.1,0.2,0.3,0.4");
  apply_setting_line(cfg, "time.init=1:30.5,2:29,4:33,8:34.25");
  apply_setting_line(cfg, "quality.anchors=10:0.18,20:0.25,30:0.3");
  apply_setting_line(cfg, "reward.denom_floor=0.25");
  apply_setting_line(cfg, "actor.x0_form=epsilon-inversion");
  apply_setting_line(cfg, "diffusion.schedule=cosine");
  apply_setting_line(cfg, "train.entropy_weight=0.07");
  apply_setting_line(cfg, "genetic.population=16");
  apply_setting_line(cfg, "harmony.bandwidth=0.05");
  apply_setting_line(cfg, "eval.episodes=7");

  CHECK(cfg.agent == "greedy");
  CHECK(cfg.env.cluster_size == 8);
  CHECK(cfg.actor.n_servers == 8);   // shapes follow the environment
  CHECK(cfg.critic.n_servers == 8);
  CHECK(cfg.env.time_model.predict_init_time(8) == doctest::Approx(34.25));
  CHECK(cfg.env.quality_model.quality_of(30) == doctest::Approx(3.0));
  CHECK(cfg.env.reward.denom_floor == doctest::Approx(0.25));
  CHECK(cfg.actor.x0_form == policy::X0Form::EpsilonInversion);
  CHECK(cfg.actor.diffusion.beta_schedule == policy::BetaSchedule::Cosine);
  CHECK(cfg.eval_episodes == 7);

  RunConfig rebuilt;
  for (const auto& [key, value] : dump_settings(cfg)) apply_setting(rebuilt, key, value);
  const auto a = dump_settings(cfg);
  const auto b = dump_settings(rebuilt);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].second == b[i].second);
}

TEST_CASE("bad settings fail loudly and by name") {
  RunConfig cfg;
  CHECK_THROWS_WITH_AS(apply_setting(cfg, "nope.key", "1"),
                       doctest::Contains("nope.key"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(apply_setting(cfg, "env.cluster_size", "four"),
                       doctest::Contains("env.cluster_size"), std::invalid_argument);
  CHECK_THROWS_AS(apply_setting_line(cfg, "no equals sign"), std::invalid_argument);
  CHECK_THROWS_AS(apply_setting(cfg, "actor.x0_form", "mystery"), std::invalid_argument);
  CHECK_THROWS_AS(apply_setting(cfg, "time.init", "1:not-a-number"), std::invalid_argument);
}

TEST_CASE("config files load, complain with line numbers, and save back") {
  TempFile good("eat_test_good.cfg");
  {
    std::ofstream out(good.path);
    out << "# tiny cluster\n"
        << "env.cluster_size=2\n"
        << "\n"
        << "  env.queue_window=3  \n"
        << "agent=random\n";
  }
  const RunConfig cfg = load_config_file(good.str());
  CHECK(cfg.env.cluster_size == 2);
  CHECK(cfg.env.queue_window == 3);
  CHECK(cfg.actor.queue_window == 3);
  CHECK(cfg.agent == "random");

  TempFile bad("eat_test_bad.cfg");
  {
    std::ofstream out(bad.path);
    out << "agent=greedy\n"
        << "env.cluster_size=2\n"
        << "env.arrival_rate=brisk\n";
  }
  CHECK_THROWS_WITH_AS(load_config_file(bad.str()), doctest::Contains(":3:"),
                       std::runtime_error);
  CHECK_THROWS_AS(load_config_file("/nonexistent/nowhere.cfg"), std::runtime_error);

  TempFile saved("eat_test_saved.cfg");
  save_config_file(cfg, saved.str());
  const RunConfig reloaded = load_config_file(saved.str());
  const auto a = dump_settings(cfg);
  const auto b = dump_settings(reloaded);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].second == b[i].second);
}

TEST_CASE("doubles are printed shortest-exact") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(33.5) == "33.5");
  CHECK(format_double(36.0) == "36");
  CHECK(format_double(1e-4) == "1e-04");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("the fixed-budget replay reproduces its published table") {
  const auto scenario = env::load_scenario(kFixtures + "/traditional.replay");
  const env::EnvConfig cfg;  // stock four-server cluster
  const auto result = run_replay(cfg, scenario);

  REQUIRE(result.rows.size() == 4);
  const double expect_response[] = {33.8, 29.6, 60.4, 84.2};
  const double expect_wait[] = {0.0, 23.8, 19.6, 50.4};
  for (size_t i = 0; i < 4; ++i) {
    const auto& row = result.rows[i];
    CHECK(row.task_id == static_cast<int>(i) + 1);
    CHECK(row.steps == 20);
    CHECK(row.quality == doctest::Approx(2.51));
    CHECK(row.wait == doctest::Approx(expect_wait[i]));
    CHECK(row.response == doctest::Approx(expect_response[i]));
  }
  CHECK(result.rows[2].parallelism == 4);
  CHECK(result.rows[2].server_ids.size() == 4);
  CHECK(result.mean_response == doctest::Approx(52.0).epsilon(0.001));
  CHECK(result.arrived == 4);
  CHECK(result.unscheduled == 0);
}

TEST_CASE("the adaptive replay reproduces its published table") {
  const auto scenario = env::load_scenario(kFixtures + "/eat.replay");
  const env::EnvConfig cfg;
  const auto result = run_replay(cfg, scenario);

  REQUIRE(result.rows.size() == 3);
  CHECK(result.rows[0].task_id == 1);
  CHECK(result.rows[0].steps == 18);
  CHECK(result.rows[0].response == doctest::Approx(33.22));
  CHECK_FALSE(result.rows[0].reuse);

  CHECK(result.rows[1].task_id == 2);
  CHECK(result.rows[1].steps == 17);
  CHECK(result.rows[1].response == doctest::Approx(22.93));
  CHECK(result.rows[1].reuse);  // no deploy charge in the measured run

  CHECK(result.rows[2].task_id == 4);
  CHECK(result.rows[2].steps == 25);
  CHECK(result.rows[2].wait == doctest::Approx(3.22));
  CHECK(result.rows[2].response == doctest::Approx(10.47));
  CHECK(result.rows[2].reuse);  // the 2-way split is still loaded on 0,1
  CHECK(result.rows[2].server_ids == std::vector<int>{0, 1});

  CHECK(result.mean_response == doctest::Approx((33.22 + 22.93 + 10.47) / 3.0));
  CHECK(result.arrived == 4);
  CHECK(result.unscheduled == 1);  // the 4-way task never gets a slot
}

TEST_CASE("replay output renders a readable table") {
  const auto scenario = env::load_scenario(kFixtures + "/traditional.replay");
  const auto result = run_replay(env::EnvConfig{}, scenario);
  std::ostringstream out;
  print_replay(out, result);
  const std::string text = out.str();
  CHECK(text.find("task") != std::string::npos);
  CHECK(text.find("33.80") != std::string::npos);
  CHECK(text.find("84.20") != std::string::npos);
  CHECK(text.find("mean response: 52.00") != std::string::npos);
  CHECK(text.find("scheduled 4/4") != std::string::npos);

  TempFile csv("eat_test_replay.csv");
  write_replay_csv(csv.str(), result);
  const std::string data = slurp(csv.str());
  CHECK(data.find("task_id,parallelism,arrival") == 0);
  CHECK(data.find("84.2") != std::string::npos);
}

TEST_CASE("evaluation records agree with their own trace") {
  const RunConfig cfg = tiny_run_config("greedy");
  std::ostringstream trace;
  JsonlTraceWriter writer(trace);
  const EvalResult live = run_eval(cfg, make_agent_factory(cfg), &writer);
  REQUIRE(live.episodes.size() == 2);

  std::istringstream in(trace.str());
  const auto replayed = records_from_trace(in, cfg.env.reward.q_min);
  REQUIRE(replayed.size() == live.episodes.size());
  for (size_t i = 0; i < replayed.size(); ++i) {
    const auto& a = live.episodes[i];
    const auto& b = replayed[i];
    CHECK(a.seed == b.seed);
    CHECK(a.decisions == b.decisions);
    CHECK(a.arrived == b.arrived);
    CHECK(a.scheduled == b.scheduled);
    CHECK(a.completed == b.completed);
    CHECK(a.qos_violations == b.qos_violations);
    CHECK(a.reloads == b.reloads);
    CHECK(a.total_reward == doctest::Approx(b.total_reward));
    CHECK(a.mean_latency == doctest::Approx(b.mean_latency));
    CHECK(a.mean_quality == doctest::Approx(b.mean_quality));
  }

  const auto pooled = pool_metrics(live.episodes);
  CHECK(pooled.episodes == 2);
  CHECK(pooled.mean_episode_reward ==
        doctest::Approx((live.episodes[0].total_reward + live.episodes[1].total_reward) / 2.0));
  CHECK(pooled.reload_rate >= 0.0);
  CHECK(pooled.reload_rate <= 1.0);
  if (pooled.mean_latency > 0.0) CHECK(pooled.efficiency > 0.0);
}

TEST_CASE("trace parsing rejects malformed streams") {
  std::istringstream missing_start(R"({"event":"arrival","t":0,"task":1,"parallelism":2})");
  CHECK_THROWS_WITH_AS(records_from_trace(missing_start, 2.3),
                       doctest::Contains("before episode_start"), std::runtime_error);
  std::istringstream garbage("not json at all\n");
  CHECK_THROWS_WITH_AS(records_from_trace(garbage, 2.3), doctest::Contains("trace line 1"),
                       std::runtime_error);
}

TEST_CASE("agent names map onto the right ablations") {
  CHECK(is_policy_agent("eat"));
  CHECK(is_policy_agent("eat-da"));
  CHECK_FALSE(is_policy_agent("greedy"));

  policy::ActorConfig base;
  const auto full = ablated_actor_config(base, "eat");
  CHECK(full.use_attention);
  CHECK(full.use_diffusion);
  const auto no_attn = ablated_actor_config(base, "eat-a");
  CHECK_FALSE(no_attn.use_attention);
  CHECK(no_attn.use_diffusion);
  const auto no_diff = ablated_actor_config(base, "eat-d");
  CHECK(no_diff.use_attention);
  CHECK_FALSE(no_diff.use_diffusion);
  const auto neither = ablated_actor_config(base, "eat-da");
  CHECK_FALSE(neither.use_attention);
  CHECK_FALSE(neither.use_diffusion);
  CHECK_THROWS_AS((void)ablated_actor_config(base, "greedy"), std::invalid_argument);

  RunConfig cfg = tiny_run_config("nonsense");
  CHECK_THROWS_AS((void)make_agent_factory(cfg), std::invalid_argument);

  for (const std::string name : {"eat", "eat-a", "eat-d", "eat-da", "greedy", "random"}) {
    cfg = tiny_run_config(name);
    const auto factory = make_agent_factory(cfg);
    CHECK(factory(1)->name() == name);
  }
}

TEST_CASE("a checkpoint pins policy weights across different init seeds") {
  RunConfig cfg = tiny_run_config("eat");
  const EvalResult fresh = run_eval(cfg, make_agent_factory(cfg));

  PolicyAgent reference(ablated_actor_config(cfg.actor, "eat"), cfg.train.seed, "eat");
  nn::NamedParams params;
  reference.actor().collect(params);
  TempFile ckpt("eat_test_policy.ckpt");
  nn::snapshot(params).save_file(ckpt.str());

  RunConfig other = cfg;
  other.train.seed = 9999;  // without the checkpoint this would reshuffle the weights
  const EvalResult restored = run_eval(other, make_agent_factory(other, ckpt.str()));
  REQUIRE(restored.episodes.size() == fresh.episodes.size());
  for (size_t i = 0; i < fresh.episodes.size(); ++i) {
    CHECK(restored.episodes[i].total_reward == fresh.episodes[i].total_reward);
    CHECK(restored.episodes[i].decisions == fresh.episodes[i].decisions);
    CHECK(restored.episodes[i].scheduled == fresh.episodes[i].scheduled);
  }

  const EvalResult reshuffled = run_eval(other, make_agent_factory(other));
  bool differs = false;
  for (size_t i = 0; i < fresh.episodes.size(); ++i)
    differs = differs || reshuffled.episodes[i].total_reward != fresh.episodes[i].total_reward;
  CHECK(differs);
}

TEST_CASE("sequence optimizers plug in as per-episode agents") {
  RunConfig cfg = tiny_run_config("genetic");
  cfg.eval_episodes = 1;
  cfg.genetic.population = 4;
  cfg.genetic.generations = 2;
  cfg.genetic.parents = 2;
  cfg.genetic.tournament = 2;
  cfg.genetic.sequence_length = 4;

  const EvalResult a = run_eval(cfg, make_agent_factory(cfg));
  const EvalResult b = run_eval(cfg, make_agent_factory(cfg));
  REQUIRE(a.episodes.size() == 1);
  CHECK(a.episodes[0].total_reward == doctest::Approx(b.episodes[0].total_reward));

  // A pinned plan bypasses the per-episode search entirely.
  baselines::ActionSequence plan;
  plan.queue_window = cfg.env.queue_window;
  core::ActionVector idle;
  idle.exec_gate = 1.0;
  idle.steps_fraction = 0.0;
  idle.task_prefs = {0.0, 0.0};
  plan.actions.assign(4, idle);
  TempFile seqfile("eat_test_plan.json");
  plan.save_file(seqfile.str());
  const EvalResult pinned = run_eval(cfg, make_agent_factory(cfg, "", seqfile.str()));
  CHECK(pinned.episodes[0].scheduled == 0);  // the pinned plan only idles
}

TEST_CASE("decision latency sampling yields ordered percentiles") {
  RunConfig cfg = tiny_run_config("random");
  const auto stats = measure_decision_latency(cfg, make_agent_factory(cfg), 40);
  CHECK(stats.decisions == 40);
  CHECK(stats.mean_us > 0.0);
  CHECK(stats.p50_us > 0.0);
  CHECK(stats.p95_us >= stats.p50_us);
  CHECK(stats.max_us >= stats.p95_us);

  TempFile csv("eat_test_latency.csv");
  write_latency_csv(csv.str(), "random", stats);
  const std::string data = slurp(csv.str());
  CHECK(data.find("agent,decisions,mean_us,p50_us,p95_us,max_us\n") == 0);
  CHECK(data.find("random,40,") != std::string::npos);
}

TEST_CASE("the CSV writer emits exactly what it was given") {
  TempFile csv("eat_test_write.csv");
  write_csv(csv.str(), {"a", "b"}, {{"1", "2"}, {"3", "4"}});
  CHECK(slurp(csv.str()) == "a,b\n1,2\n3,4\n");
  CHECK_THROWS_AS(write_csv(csv.str(), {"a", "b"}, {{"only-one"}}), std::invalid_argument);
}

TEST_CASE("run directories are created where asked") {
  const auto base = std::filesystem::temp_directory_path() / "eat_test_rundir" / "nested";
  const RunDir dir = RunDir::create(base.string(), "eval");
  CHECK(std::filesystem::is_directory(dir.path));
  CHECK(dir.file("x.csv") == base.string() + "/x.csv");
  std::error_code ec;
  std::filesystem::remove_all(std::filesystem::temp_directory_path() / "eat_test_rundir", ec);
}

}  // TEST_SUITE
