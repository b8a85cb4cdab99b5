#pragma once

#include <span>
#include <vector>

#include "eat/core/types.hpp"

namespace eat::env {

/// Result of a placement request: the chosen server ids, and whether the task
/// can reuse an already-deployed model (in which case no init cost is paid).
struct Placement {
  bool feasible = false;
  bool reuse = false;
  std::vector<int> server_ids;
};

/// Ids of idle servers whose loaded model matches `model_group`.
std::vector<int> model_reuse_group(std::span<const core::ServerState> servers, int model_group);

/// Picks `count` servers for a task of model group `model_group` (== its
/// patch count). Reuse applies only when the idle group holding that model has
/// exactly `count` members. Otherwise idle servers are drawn preferring ones
/// whose removal does not break an exactly-reusable idle group, then unloaded
/// ones, then lowest ids. Infeasible when fewer than `count` servers are idle.
Placement select_servers(std::span<const core::ServerState> servers, int count, int model_group);

}  // namespace eat::env
