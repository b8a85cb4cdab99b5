#include "eat/nn/attention.hpp"

#include <cmath>

namespace eat::nn {

Node* scaled_dot_attention(Node* q, Node* k, Node* v) {
  if (q->value.cols() != k->value.cols())
    throw std::invalid_argument("query/key width mismatch");
  if (k->value.rows() != v->value.rows())
    throw std::invalid_argument("key/value length mismatch");
  const double inv_sqrt_dk = 1.0 / std::sqrt(static_cast<double>(q->value.cols()));
  Node* scores = scale(matmul_nt(q, k), inv_sqrt_dk);
  return matmul(softmax_rows(scores), v);
}

Tensor attention_forward(const Tensor& q, const Tensor& k, const Tensor& v) {
  Graph g;
  return scaled_dot_attention(g.constant(q), g.constant(k), g.constant(v))->value;
}

}  // namespace eat::nn
