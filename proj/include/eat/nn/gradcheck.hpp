#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "eat/nn/graph.hpp"

namespace eat::nn {

struct GradCheckResult {
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  int coords_checked = 0;
};

/// Central-difference check of analytic gradients. `build` constructs the
/// scalar expression over the given parameters inside a fresh graph; it is
/// re-run for every probe. Large tensors are probed on a seeded random subset
/// of coordinates. Relative error uses |ga - gn| / max(1, |ga| + |gn|).
GradCheckResult gradient_check(const std::function<Node*(Graph&)>& build,
                               std::span<Parameter* const> params, double h = 1e-5,
                               int max_coords_per_param = 64, std::uint64_t seed = 7);

}  // namespace eat::nn
