#pragma once

#include <cstdint>
#include <vector>

#include "eat/nn/graph.hpp"

namespace eat::nn {

struct AdamConfig {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;  // decoupled: shrinks values, never touches moments
};

/// Adam over a fixed parameter list. step() consumes the accumulated
/// gradients; callers zero them (or call zero_grad) between steps.
class Adam {
 public:
  Adam(std::vector<Parameter*> params, AdamConfig cfg);

  void step();
  void zero_grad();
  std::int64_t steps_taken() const { return t_; }

 private:
  std::vector<Parameter*> params_;
  AdamConfig cfg_;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
  std::int64_t t_ = 0;
};

}  // namespace eat::nn
