#include "eat/env/cluster.hpp"

#include <algorithm>
#include <array>
#include <map>

namespace eat::env {

std::vector<int> model_reuse_group(std::span<const core::ServerState> servers, int model_group) {
  std::vector<int> ids;
  for (const auto& e : servers) {
    if (e.available && e.loaded_model == model_group && model_group != 0) ids.push_back(e.id);
  }
  return ids;
}

Placement select_servers(std::span<const core::ServerState> servers, int count,
                         int model_group) {
  if (count < 1) throw std::invalid_argument("server count must be >= 1");

  auto reuse_ids = model_reuse_group(servers, model_group);
  if (static_cast<int>(reuse_ids.size()) == count) {
    return {true, true, std::move(reuse_ids)};
  }

  // Idle-group sizes per loaded model, to tell which groups are exactly
  // reusable (breaking those is the last resort).
  std::map<int, int> idle_group_size;
  std::vector<const core::ServerState*> idle;
  for (const auto& e : servers) {
    if (!e.available) continue;
    idle.push_back(&e);
    if (e.loaded_model != 0) ++idle_group_size[e.loaded_model];
  }
  if (static_cast<int>(idle.size()) < count) return {};

  auto key = [&](const core::ServerState* e) {
    const bool in_reusable_group =
        e->loaded_model != 0 && idle_group_size[e->loaded_model] == e->loaded_model;
    const bool loaded = e->loaded_model != 0;
    return std::array<int, 3>{in_reusable_group ? 1 : 0, loaded ? 1 : 0, e->id};
  };
  std::sort(idle.begin(), idle.end(),
            [&](const core::ServerState* a, const core::ServerState* b) { return key(a) < key(b); });

  Placement p;
  p.feasible = true;
  p.reuse = false;
  for (int i = 0; i < count; ++i) p.server_ids.push_back(idle[static_cast<size_t>(i)]->id);
  std::sort(p.server_ids.begin(), p.server_ids.end());
  return p;
}

}  // namespace eat::env
