#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eat/nn/tensor.hpp"

namespace eat::nn {

/// Trainable tensor: value plus an accumulated gradient that persists across
/// graphs until an optimizer consumes it.
struct Parameter {
  Tensor value;
  Tensor grad;

  Parameter() = default;
  explicit Parameter(Tensor v) : value(std::move(v)), grad(value.rows(), value.cols()) {}
  void zero_grad() { grad.fill(0.0); }
};

using NamedParams = std::vector<std::pair<std::string, Parameter*>>;

class Graph;

/// A node in a single-use computation graph. `grad` is allocated by
/// Graph::backward; `backprop` scatters it into the parents' grads.
struct Node {
  Tensor value;
  Tensor grad;
  std::vector<Node*> parents;
  std::function<void(Node&)> backprop;
  Parameter* param = nullptr;
  Graph* graph = nullptr;
  bool visited = false;
};

/// Owns the nodes of one forward pass. Build the expression, call backward on
/// a scalar output, then read parameter gradients. Graphs are cheap to throw
/// away; parameters live outside.
class Graph {
 public:
  Node* constant(Tensor v);
  Node* param(Parameter& p);

  /// Seeds d(root)/d(root) = 1 and accumulates gradients into every reachable
  /// node and parameter. Root must be 1x1.
  void backward(Node* root);

  Node* make(Tensor value, std::vector<Node*> parents, std::function<void(Node&)> backprop);

 private:
  std::vector<std::unique_ptr<Node>> nodes_;
};

// ---- operations -----------------------------------------------------------

Node* matmul(Node* a, Node* b);     // (m x k) * (k x n)
Node* matmul_nt(Node* a, Node* b);  // (m x k) * (n x k)^T
Node* add(Node* a, Node* b);
Node* sub(Node* a, Node* b);
Node* mul(Node* a, Node* b);  // elementwise
Node* add_rowvec(Node* a, Node* b);  // broadcast a 1 x n row over m rows
Node* affine(Node* a, double scale, double shift);
Node* scale(Node* a, double k);
Node* tanh_op(Node* a);
Node* mish(Node* a);
Node* exp_op(Node* a);
Node* clamp(Node* a, double lo, double hi);
Node* minimum(Node* a, Node* b);  // elementwise min, ties route gradient to a
Node* softmax_rows(Node* a);
Node* mean_rows(Node* a);  // (m x n) -> (1 x n)
Node* row_sum(Node* a);    // (m x n) -> (m x 1)
Node* mean_all(Node* a);   // -> (1 x 1)
Node* sum_all(Node* a);    // -> (1 x 1)
Node* concat_cols(std::span<Node* const> parts);
Node* slice_cols(Node* a, int from, int len);
Node* stack_rows(std::span<Node* const> rows);  // m rows of (1 x n) -> (m x n)

double mish_scalar(double x);

}  // namespace eat::nn
