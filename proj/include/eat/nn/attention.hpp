#pragma once

#include "eat/nn/graph.hpp"

namespace eat::nn {

/// softmax(q k^T / sqrt(d_k)) v with row-wise softmax.
/// q: n_q x d_k, k: n x d_k, v: n x d_v -> n_q x d_v.
Node* scaled_dot_attention(Node* q, Node* k, Node* v);

/// Graph-free convenience wrapper for direct evaluation.
Tensor attention_forward(const Tensor& q, const Tensor& k, const Tensor& v);

}  // namespace eat::nn
