#pragma once

#include <string>

#include "eat/core/types.hpp"
#include "eat/env/environment.hpp"

namespace eat::baselines {

/// Anything that can pick the next decision for a live environment.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual core::Decision decide(const env::Environment& env) = 0;
  virtual std::string name() const = 0;
};

}  // namespace eat::baselines
