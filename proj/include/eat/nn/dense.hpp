#pragma once

#include <random>
#include <string>
#include <vector>

#include "eat/nn/graph.hpp"

namespace eat::nn {

enum class Activation { Identity, Tanh, Mish };

/// Fully-connected stack. `widths` runs input -> hidden... -> output; hidden
/// layers use `hidden`, the last layer uses `output`. Weights and biases are
/// initialised uniformly in +-1/sqrt(fan_in).
class DenseNet {
 public:
  DenseNet() = default;
  DenseNet(std::vector<int> widths, Activation hidden, Activation output, std::mt19937_64& g);

  Node* forward(Graph& g, Node* x);  // x: batch x in_dim

  /// Graph-free forward pass for inference-only callers.
  Tensor predict(const Tensor& x) const;

  int in_dim() const { return widths_.empty() ? 0 : widths_.front(); }
  int out_dim() const { return widths_.empty() ? 0 : widths_.back(); }

  void collect(const std::string& prefix, NamedParams& out);

 private:
  struct Layer {
    Parameter w;  // in x out
    Parameter b;  // 1 x out
    Activation act = Activation::Identity;
  };
  std::vector<int> widths_;
  std::vector<Layer> layers_;
};

/// Fills a tensor with uniform +-1/sqrt(fan_in) draws.
void init_uniform_fan_in(Tensor& t, int fan_in, std::mt19937_64& g);

Node* apply_activation(Node* x, Activation a);

}  // namespace eat::nn
