#include "eat/harness/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace eat::harness {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_int(long long v) { return std::to_string(v); }

namespace {

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

long long parse_int(const std::string& s) {
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& s) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::invalid_argument("not an unsigned integer: '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw std::invalid_argument("not a boolean: '" + s + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string format_int_map(const std::map<int, double>& m) {
  std::string out;
  for (const auto& [k, v] : m) {
    if (!out.empty()) out += ',';
    out += std::to_string(k) + ':' + format_double(v);
  }
  return out;
}

std::map<int, double> parse_int_map(const std::string& s) {
  std::map<int, double> out;
  for (const auto& item : split(s, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("expected k:v pairs, got '" + item + "'");
    out[static_cast<int>(parse_int(item.substr(0, colon)))] =
        parse_double(item.substr(colon + 1));
  }
  if (out.empty()) throw std::invalid_argument("empty map value");
  return out;
}

struct KeyBinding {
  std::string key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

const std::vector<KeyBinding>& bindings() {
#define BIND_INT(key, field)                                                      \
  KeyBinding {                                                                    \
    key, [](const RunConfig& c) { return format_int(c.field); },                  \
        [](RunConfig& c, const std::string& v) {                                  \
          c.field = static_cast<decltype(c.field)>(parse_int(v));                 \
        }                                                                         \
  }
#define BIND_U64(key, field)                                                      \
  KeyBinding {                                                                    \
    key, [](const RunConfig& c) { return std::to_string(c.field); },              \
        [](RunConfig& c, const std::string& v) { c.field = parse_u64(v); }        \
  }
#define BIND_DOUBLE(key, field)                                                   \
  KeyBinding {                                                                    \
    key, [](const RunConfig& c) { return format_double(c.field); },               \
        [](RunConfig& c, const std::string& v) { c.field = parse_double(v); }     \
  }
#define BIND_BOOL(key, field)                                                     \
  KeyBinding {                                                                    \
    key, [](const RunConfig& c) { return c.field ? "true" : "false"; },           \
        [](RunConfig& c, const std::string& v) { c.field = parse_bool(v); }       \
  }

  static const std::vector<KeyBinding> table = {
      KeyBinding{"agent", [](const RunConfig& c) { return c.agent; },
                 [](RunConfig& c, const std::string& v) { c.agent = v; }},

      BIND_INT("env.cluster_size", env.cluster_size),
      BIND_INT("env.queue_window", env.queue_window),
      BIND_DOUBLE("env.arrival_rate", env.arrival_rate),
      KeyBinding{"env.parallelism_weights",
                 [](const RunConfig& c) {
                   std::string out;
                   for (double w : c.env.parallelism_weights) {
                     if (!out.empty()) out += ',';
                     out += format_double(w);
                   }
                   return out;
                 },
                 [](RunConfig& c, const std::string& v) {
                   const auto parts = split(v, ',');
                   if (parts.size() != c.env.parallelism_weights.size())
                     throw std::invalid_argument("expected 4 comma-separated weights");
                   for (std::size_t i = 0; i < parts.size(); ++i)
                     c.env.parallelism_weights[i] = parse_double(parts[i]);
                 }},
      BIND_INT("env.tasks_per_episode", env.tasks_per_episode),
      BIND_DOUBLE("env.time_limit", env.time_limit),
      BIND_INT("env.decision_limit", env.decision_limit),
      BIND_DOUBLE("env.min_decision_interval", env.min_decision_interval),
      BIND_INT("env.steps_min", env.steps_min),
      BIND_INT("env.steps_max", env.steps_max),

      KeyBinding{"time.init",
                 [](const RunConfig& c) { return format_int_map(c.env.time_model.init_times()); },
                 [](RunConfig& c, const std::string& v) {
                   for (const auto& [k, sec] : parse_int_map(v)) c.env.time_model.set_init_time(k, sec);
                 }},
      KeyBinding{"time.step",
                 [](const RunConfig& c) {
                   return format_int_map(c.env.time_model.per_step_times());
                 },
                 [](RunConfig& c, const std::string& v) {
                   for (const auto& [k, sec] : parse_int_map(v))
                     c.env.time_model.set_per_step_time(k, sec);
                 }},

      KeyBinding{"quality.anchors",
                 [](const RunConfig& c) {
                   std::string out;
                   for (const auto& [steps, score] : c.env.quality_model.anchors()) {
                     if (!out.empty()) out += ',';
                     out += std::to_string(steps) + ':' + format_double(score);
                   }
                   return out;
                 },
                 [](RunConfig& c, const std::string& v) {
                   std::vector<std::pair<int, double>> anchors;
                   for (const auto& [k, score] : parse_int_map(v)) anchors.emplace_back(k, score);
                   c.env.quality_model = env::QualityModel(anchors, c.env.quality_model.weight());
                 }},
      KeyBinding{"quality.weight",
                 [](const RunConfig& c) { return format_double(c.env.quality_model.weight()); },
                 [](RunConfig& c, const std::string& v) {
                   c.env.quality_model =
                       env::QualityModel(c.env.quality_model.anchors(), parse_double(v));
                 }},

      BIND_DOUBLE("reward.alpha_q", env.reward.alpha_q),
      BIND_DOUBLE("reward.beta_t", env.reward.beta_t),
      BIND_DOUBLE("reward.mu_t", env.reward.mu_t),
      BIND_DOUBLE("reward.lambda_q", env.reward.lambda_q),
      BIND_DOUBLE("reward.q_min", env.reward.q_min),
      BIND_DOUBLE("reward.p_quality", env.reward.p_quality),
      BIND_DOUBLE("reward.denom_floor", env.reward.denom_floor),

      BIND_BOOL("actor.attention", actor.use_attention),
      BIND_BOOL("actor.diffusion", actor.use_diffusion),
      BIND_INT("actor.attention_dim", actor.attention_dim),
      BIND_INT("actor.encoder_hidden", actor.encoder_hidden),
      BIND_INT("actor.hidden", actor.denoiser_hidden),
      BIND_INT("actor.time_embed_dim", actor.time_embed_dim),
      KeyBinding{"actor.x0_form",
                 [](const RunConfig& c) {
                   return c.actor.x0_form == policy::X0Form::TanhResidual
                              ? std::string("tanh-residual")
                              : std::string("epsilon-inversion");
                 },
                 [](RunConfig& c, const std::string& v) {
                   if (v == "tanh-residual")
                     c.actor.x0_form = policy::X0Form::TanhResidual;
                   else if (v == "epsilon-inversion")
                     c.actor.x0_form = policy::X0Form::EpsilonInversion;
                   else
                     throw std::invalid_argument(
                         "expected tanh-residual or epsilon-inversion, got '" + v + "'");
                 }},
      BIND_DOUBLE("actor.time_scale", actor.time_scale),
      BIND_DOUBLE("actor.logvar_min", actor.logvar_min),
      BIND_DOUBLE("actor.logvar_max", actor.logvar_max),
      BIND_DOUBLE("actor.logvar_bias", actor.logvar_bias_init),

      BIND_INT("diffusion.steps", actor.diffusion.steps),
      KeyBinding{"diffusion.schedule",
                 [](const RunConfig& c) {
                   return c.actor.diffusion.beta_schedule == policy::BetaSchedule::Linear
                              ? std::string("linear")
                              : std::string("cosine");
                 },
                 [](RunConfig& c, const std::string& v) {
                   if (v == "linear")
                     c.actor.diffusion.beta_schedule = policy::BetaSchedule::Linear;
                   else if (v == "cosine")
                     c.actor.diffusion.beta_schedule = policy::BetaSchedule::Cosine;
                   else
                     throw std::invalid_argument("expected linear or cosine, got '" + v + "'");
                 }},
      BIND_DOUBLE("diffusion.beta_min", actor.diffusion.beta_min),
      BIND_DOUBLE("diffusion.beta_max", actor.diffusion.beta_max),

      BIND_INT("critic.hidden", critic.hidden),

      BIND_INT("train.episodes", train.episodes),
      BIND_INT("train.updates_per_episode", train.updates_per_episode),
      BIND_INT("train.batch_size", train.batch_size),
      BIND_U64("train.buffer_capacity", train.buffer_capacity),
      BIND_DOUBLE("train.gamma", train.gamma),
      BIND_DOUBLE("train.tau", train.tau),
      BIND_DOUBLE("train.entropy_weight", train.entropy_weight),
      BIND_DOUBLE("train.actor_lr", train.actor_opt.lr),
      BIND_DOUBLE("train.critic_lr", train.critic_opt.lr),
      KeyBinding{"train.weight_decay",
                 [](const RunConfig& c) { return format_double(c.train.actor_opt.weight_decay); },
                 [](RunConfig& c, const std::string& v) {
                   const double wd = parse_double(v);
                   c.train.actor_opt.weight_decay = wd;
                   c.train.critic_opt.weight_decay = wd;
                 }},
      BIND_U64("train.seed", train.seed),

      BIND_INT("eval.episodes", eval_episodes),
      BIND_U64("eval.seed", eval_seed),
      BIND_INT("bench.decisions", bench_decisions),

      BIND_INT("genetic.population", genetic.population),
      BIND_INT("genetic.generations", genetic.generations),
      BIND_INT("genetic.parents", genetic.parents),
      BIND_INT("genetic.tournament", genetic.tournament),
      BIND_DOUBLE("genetic.mutation_rate", genetic.mutation_rate),
      BIND_INT("genetic.elites", genetic.elites),
      BIND_INT("genetic.sequence_length", genetic.sequence_length),
      BIND_U64("genetic.seed", genetic.seed),
      BIND_U64("genetic.episode_seed", genetic.episode_seed),

      BIND_INT("harmony.memory", harmony.memory),
      BIND_INT("harmony.improvisations", harmony.improvisations),
      BIND_DOUBLE("harmony.consider_rate", harmony.consider_rate),
      BIND_DOUBLE("harmony.pitch_rate", harmony.pitch_rate),
      BIND_DOUBLE("harmony.bandwidth", harmony.bandwidth),
      BIND_INT("harmony.sequence_length", harmony.sequence_length),
      BIND_U64("harmony.seed", harmony.seed),
      BIND_U64("harmony.episode_seed", harmony.episode_seed),
  };
#undef BIND_INT
#undef BIND_U64
#undef BIND_DOUBLE
#undef BIND_BOOL
  return table;
}

}  // namespace

void RunConfig::sync_shapes() {
  actor.n_servers = env.cluster_size;
  actor.queue_window = env.queue_window;
  critic.n_servers = env.cluster_size;
  critic.queue_window = env.queue_window;
}

void RunConfig::validate() const {
  env.validate();
  actor.validate();
  critic.validate();
  train.validate();
  genetic.validate();
  harmony.validate();
  if (eval_episodes < 1) throw std::invalid_argument("eval.episodes must be positive");
  if (bench_decisions < 1) throw std::invalid_argument("bench.decisions must be positive");
}

std::vector<std::pair<std::string, std::string>> dump_settings(const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(bindings().size());
  for (const auto& b : bindings()) out.emplace_back(b.key, b.get(c));
  return out;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  for (const auto& b : bindings()) {
    if (b.key == key) {
      try {
        b.set(c, value);
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("setting '" + key + "': " + e.what());
      }
      c.sync_shapes();
      return;
    }
  }
  throw std::invalid_argument("unknown setting '" + key + "'");
}

void apply_setting_line(RunConfig& c, const std::string& line) {
  const auto eq = line.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("expected key=value, got '" + line + "'");
  apply_setting(c, line.substr(0, eq), line.substr(eq + 1));
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  RunConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    try {
      apply_setting_line(c, line.substr(first, last - first + 1));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return c;
}

void save_config_file(const RunConfig& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open config file for writing: " + path);
  for (const auto& [key, value] : dump_settings(c)) out << key << '=' << value << '\n';
}

}  // namespace eat::harness
