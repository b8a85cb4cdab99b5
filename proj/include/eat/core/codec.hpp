#pragma once

#include <span>

#include "eat/core/types.hpp"

namespace eat::core {

/// Builds the 3 x (|servers| + l) observation matrix at time `now`. The first
/// min(l, queue size) queued tasks fill the task columns; unused task columns
/// stay zero. Waiting times are stored raw (seconds); any normalisation is the
/// consumer's business.
SystemState encode_state(std::span<const ServerState> servers, std::span<const Task> queue,
                         double now, int queue_window);

/// Maps a raw action vector onto a decision. Gate above 0.5 yields NoOp, as
/// does an empty visible queue. Otherwise the task with the largest preference
/// among the first `queue_len` slots wins (ties to the lowest index) and the
/// steps knob is scaled onto [steps_min, steps_max] and rounded.
Decision decode_action(const ActionVector& a, int queue_len, int steps_min, int steps_max);

}  // namespace eat::core
