#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eat/baselines/agent.hpp"

namespace eat::baselines {

/// Fixed open-loop plan: one raw action vector per decision epoch. This is
/// the genome the sequence optimizers work on.
struct ActionSequence {
  int queue_window = 5;
  std::vector<core::ActionVector> actions;

  int entry_width() const { return queue_window + 2; }
  std::vector<double> flatten() const;
  static ActionSequence unflatten(std::span<const double> flat, int queue_window);

  void save_file(const std::string& path) const;
  static ActionSequence load_file(const std::string& path);
};

/// Best plan found by a sequence optimizer, with its score trajectory.
struct OptimizeResult {
  ActionSequence best;
  double best_reward = 0.0;
  std::vector<double> history;  // best-so-far reward per round
};

/// Total episode reward from replaying the plan on a fresh environment; the
/// plan idles once it runs out of entries.
double episode_reward(const env::EnvConfig& cfg, const ActionSequence& seq, std::uint64_t seed);

/// Plays a plan back one decision at a time.
class SequenceAgent : public Agent {
 public:
  explicit SequenceAgent(ActionSequence seq, std::string name = "sequence")
      : seq_(std::move(seq)), name_(std::move(name)) {}

  core::Decision decide(const env::Environment& env) override;
  std::string name() const override { return name_; }
  void rewind() { pos_ = 0; }

 private:
  ActionSequence seq_;
  std::size_t pos_ = 0;
  std::string name_;
};

}  // namespace eat::baselines
