#include "eat/baselines/sequence.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

#include "eat/core/codec.hpp"

namespace eat::baselines {

std::vector<double> ActionSequence::flatten() const {
  std::vector<double> out;
  out.reserve(actions.size() * static_cast<std::size_t>(entry_width()));
  for (const auto& a : actions) {
    if (static_cast<int>(a.size()) != entry_width())
      throw std::invalid_argument("sequence entry width mismatch");
    const auto flat = a.flat();
    out.insert(out.end(), flat.begin(), flat.end());
  }
  return out;
}

ActionSequence ActionSequence::unflatten(std::span<const double> flat, int queue_window) {
  ActionSequence seq;
  seq.queue_window = queue_window;
  const auto width = static_cast<std::size_t>(seq.entry_width());
  if (width < 3) throw std::invalid_argument("queue window must be positive");
  if (flat.size() % width != 0)
    throw std::invalid_argument("flat sequence length is not a multiple of the entry width");
  seq.actions.reserve(flat.size() / width);
  for (std::size_t i = 0; i < flat.size(); i += width) {
    seq.actions.push_back(
        core::ActionVector::from_flat({flat.begin() + static_cast<std::ptrdiff_t>(i),
                                       flat.begin() + static_cast<std::ptrdiff_t>(i + width)}));
  }
  return seq;
}

void ActionSequence::save_file(const std::string& path) const {
  nlohmann::json j;
  j["queue_window"] = queue_window;
  auto& arr = j["actions"] = nlohmann::json::array();
  for (const auto& a : actions) arr.push_back(a.flat());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open sequence file for writing: " + path);
  out << j.dump(2) << '\n';
}

ActionSequence ActionSequence::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sequence file: " + path);
  nlohmann::json j;
  in >> j;
  ActionSequence seq;
  seq.queue_window = j.at("queue_window").get<int>();
  for (const auto& entry : j.at("actions")) {
    seq.actions.push_back(core::ActionVector::from_flat(entry.get<std::vector<double>>()));
    if (static_cast<int>(seq.actions.back().size()) != seq.entry_width())
      throw std::runtime_error("sequence file entry width mismatch: " + path);
  }
  return seq;
}

double episode_reward(const env::EnvConfig& cfg, const ActionSequence& seq, std::uint64_t seed) {
  env::Environment env(cfg);
  env.reset(seed);
  double total = 0.0;
  std::size_t pos = 0;
  while (!env.done()) {
    core::Decision d = core::Decision::noop();
    if (pos < seq.actions.size())
      d = core::decode_action(seq.actions[pos], env.visible_queue_len(), cfg.steps_min,
                              cfg.steps_max);
    ++pos;
    total += env.step(d).reward;
  }
  return total;
}

core::Decision SequenceAgent::decide(const env::Environment& env) {
  if (pos_ >= seq_.actions.size()) return core::Decision::noop();
  const auto& cfg = env.config();
  return core::decode_action(seq_.actions[pos_++], env.visible_queue_len(), cfg.steps_min,
                             cfg.steps_max);
}

}  // namespace eat::baselines
