#include "eat/harness/bench.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "eat/harness/run_dir.hpp"

namespace eat::harness {

LatencyStats measure_decision_latency(const RunConfig& cfg, const AgentFactory& make,
                                      int decisions) {
  if (decisions < 1) throw std::invalid_argument("need at least one decision to time");
  using clock = std::chrono::steady_clock;
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(decisions));
  std::uint64_t episode = 0;
  while (static_cast<int>(samples.size()) < decisions) {
    const std::uint64_t seed = cfg.eval_seed + episode++;
    auto agent = make(seed);
    env::Environment env(cfg.env);
    env.reset(seed);
    while (!env.done() && static_cast<int>(samples.size()) < decisions) {
      const auto t0 = clock::now();
      const core::Decision d = agent->decide(env);
      const auto t1 = clock::now();
      samples.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count());
      env.step(d);
    }
  }

  LatencyStats st;
  st.decisions = static_cast<int>(samples.size());
  double total = 0.0;
  for (double v : samples) total += v;
  st.mean_us = total / static_cast<double>(samples.size());
  std::sort(samples.begin(), samples.end());
  const auto quantile = [&](double q) {
    const auto idx = static_cast<std::size_t>(q * static_cast<double>(samples.size() - 1));
    return samples[idx];
  };
  st.p50_us = quantile(0.5);
  st.p95_us = quantile(0.95);
  st.max_us = samples.back();
  return st;
}

void write_latency_csv(const std::string& path, const std::string& agent,
                       const LatencyStats& s) {
  write_csv(path, {"agent", "decisions", "mean_us", "p50_us", "p95_us", "max_us"},
            {{agent, format_int(s.decisions), format_double(s.mean_us), format_double(s.p50_us),
              format_double(s.p95_us), format_double(s.max_us)}});
}

}  // namespace eat::harness
