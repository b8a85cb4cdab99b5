#include "eat/nn/graph.hpp"

#include <algorithm>
#include <cmath>

namespace eat::nn {

namespace {

double softplus(double x) {
  if (x > 20.0) return x;
  if (x < -20.0) return std::exp(x);
  return std::log1p(std::exp(x));
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void check_same_shape(const Node* a, const Node* b) {
  if (!a->value.same_shape(b->value)) throw std::invalid_argument("node shape mismatch");
}

/// Elementwise unary op with derivative expressed from input and output.
Node* unary(Node* a, const std::function<double(double)>& f,
            const std::function<double(double, double)>& dfdx) {
  Tensor out(a->value.rows(), a->value.cols());
  for (size_t i = 0; i < out.size(); ++i) out.data()[i] = f(a->value.data()[i]);
  return a->graph->make(std::move(out), {a}, [a, dfdx](Node& n) {
    for (size_t i = 0; i < n.value.size(); ++i)
      a->grad.data()[i] += n.grad.data()[i] * dfdx(a->value.data()[i], n.value.data()[i]);
  });
}

}  // namespace

double mish_scalar(double x) { return x * std::tanh(softplus(x)); }

Node* Graph::make(Tensor value, std::vector<Node*> parents,
                  std::function<void(Node&)> backprop) {
  auto node = std::make_unique<Node>();
  node->value = std::move(value);
  node->parents = std::move(parents);
  node->backprop = std::move(backprop);
  node->graph = this;
  nodes_.push_back(std::move(node));
  return nodes_.back().get();
}

Node* Graph::constant(Tensor v) { return make(std::move(v), {}, nullptr); }

Node* Graph::param(Parameter& p) {
  Node* n = make(p.value, {}, nullptr);
  n->param = &p;
  return n;
}

void Graph::backward(Node* root) {
  if (root->graph != this) throw std::invalid_argument("node belongs to another graph");
  if (root->value.rows() != 1 || root->value.cols() != 1)
    throw std::invalid_argument("backward root must be scalar");

  // Iterative post-order topo sort from the root.
  std::vector<Node*> order;
  std::vector<std::pair<Node*, size_t>> stack{{root, 0}};
  root->visited = true;
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      Node* p = node->parents[next++];
      if (!p->visited) {
        p->visited = true;
        stack.emplace_back(p, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  for (Node* n : order) n->grad = Tensor(n->value.rows(), n->value.cols());
  root->grad(0, 0) = 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* n = *it;
    if (n->backprop) n->backprop(*n);
    if (n->param != nullptr) add_inplace(n->param->grad, n->grad);
  }
  for (Node* n : order) n->visited = false;
}

Node* matmul(Node* a, Node* b) {
  if (a->value.cols() != b->value.rows()) throw std::invalid_argument("matmul shape mismatch");
  Tensor out = nn::matmul(a->value, b->value);
  return a->graph->make(std::move(out), {a, b}, [a, b](Node& n) {
    add_inplace(a->grad, nn::matmul(n.grad, b->value, false, true));
    add_inplace(b->grad, nn::matmul(a->value, n.grad, true, false));
  });
}

Node* matmul_nt(Node* a, Node* b) {
  if (a->value.cols() != b->value.cols()) throw std::invalid_argument("matmul_nt shape mismatch");
  Tensor out = nn::matmul(a->value, b->value, false, true);
  return a->graph->make(std::move(out), {a, b}, [a, b](Node& n) {
    add_inplace(a->grad, nn::matmul(n.grad, b->value));
    add_inplace(b->grad, nn::matmul(n.grad, a->value, true, false));
  });
}

Node* add(Node* a, Node* b) {
  check_same_shape(a, b);
  Tensor out = a->value;
  add_inplace(out, b->value);
  return a->graph->make(std::move(out), {a, b}, [a, b](Node& n) {
    add_inplace(a->grad, n.grad);
    add_inplace(b->grad, n.grad);
  });
}

Node* sub(Node* a, Node* b) {
  check_same_shape(a, b);
  Tensor out = a->value;
  for (size_t i = 0; i < out.size(); ++i) out.data()[i] -= b->value.data()[i];
  return a->graph->make(std::move(out), {a, b}, [a, b](Node& n) {
    add_inplace(a->grad, n.grad);
    for (size_t i = 0; i < n.grad.size(); ++i) b->grad.data()[i] -= n.grad.data()[i];
  });
}

Node* mul(Node* a, Node* b) {
  check_same_shape(a, b);
  Tensor out = a->value;
  for (size_t i = 0; i < out.size(); ++i) out.data()[i] *= b->value.data()[i];
  return a->graph->make(std::move(out), {a, b}, [a, b](Node& n) {
    for (size_t i = 0; i < n.grad.size(); ++i) {
      a->grad.data()[i] += n.grad.data()[i] * b->value.data()[i];
      b->grad.data()[i] += n.grad.data()[i] * a->value.data()[i];
    }
  });
}

Node* add_rowvec(Node* a, Node* b) {
  if (b->value.rows() != 1 || b->value.cols() != a->value.cols())
    throw std::invalid_argument("row broadcast shape mismatch");
  Tensor out = a->value;
  for (int i = 0; i < out.rows(); ++i)
    for (int j = 0; j < out.cols(); ++j) out(i, j) += b->value(0, j);
  return a->graph->make(std::move(out), {a, b}, [a, b](Node& n) {
    add_inplace(a->grad, n.grad);
    for (int i = 0; i < n.grad.rows(); ++i)
      for (int j = 0; j < n.grad.cols(); ++j) b->grad(0, j) += n.grad(i, j);
  });
}

Node* affine(Node* a, double scale_k, double shift) {
  Tensor out = a->value;
  for (size_t i = 0; i < out.size(); ++i) out.data()[i] = scale_k * out.data()[i] + shift;
  return a->graph->make(std::move(out), {a}, [a, scale_k](Node& n) {
    for (size_t i = 0; i < n.grad.size(); ++i) a->grad.data()[i] += scale_k * n.grad.data()[i];
  });
}

Node* scale(Node* a, double k) { return affine(a, k, 0.0); }

Node* tanh_op(Node* a) {
  return unary(
      a, [](double x) { return std::tanh(x); },
      [](double, double y) { return 1.0 - y * y; });
}

Node* mish(Node* a) {
  return unary(
      a, [](double x) { return mish_scalar(x); },
      [](double x, double) {
        const double sp = softplus(x);
        const double t = std::tanh(sp);
        return t + x * (1.0 - t * t) * sigmoid(x);
      });
}

Node* exp_op(Node* a) {
  return unary(
      a, [](double x) { return std::exp(x); }, [](double, double y) { return y; });
}

Node* clamp(Node* a, double lo, double hi) {
  return unary(
      a, [lo, hi](double x) { return std::clamp(x, lo, hi); },
      [lo, hi](double x, double) { return (x > lo && x < hi) ? 1.0 : 0.0; });
}

Node* minimum(Node* a, Node* b) {
  check_same_shape(a, b);
  Tensor out = a->value;
  for (size_t i = 0; i < out.size(); ++i) out.data()[i] = std::min(out.data()[i], b->value.data()[i]);
  return a->graph->make(std::move(out), {a, b}, [a, b](Node& n) {
    for (size_t i = 0; i < n.grad.size(); ++i) {
      if (a->value.data()[i] <= b->value.data()[i])
        a->grad.data()[i] += n.grad.data()[i];
      else
        b->grad.data()[i] += n.grad.data()[i];
    }
  });
}

Node* softmax_rows(Node* a) {
  Tensor out = a->value;
  for (int i = 0; i < out.rows(); ++i) {
    double mx = out(i, 0);
    for (int j = 1; j < out.cols(); ++j) mx = std::max(mx, out(i, j));
    double sum = 0;
    for (int j = 0; j < out.cols(); ++j) {
      out(i, j) = std::exp(out(i, j) - mx);
      sum += out(i, j);
    }
    for (int j = 0; j < out.cols(); ++j) out(i, j) /= sum;
  }
  return a->graph->make(std::move(out), {a}, [a](Node& n) {
    // dx = y * (dy - sum_j dy_j y_j) per row
    for (int i = 0; i < n.value.rows(); ++i) {
      double dot = 0;
      for (int j = 0; j < n.value.cols(); ++j) dot += n.grad(i, j) * n.value(i, j);
      for (int j = 0; j < n.value.cols(); ++j)
        a->grad(i, j) += n.value(i, j) * (n.grad(i, j) - dot);
    }
  });
}

Node* mean_rows(Node* a) {
  const int m = a->value.rows();
  Tensor out(1, a->value.cols());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < a->value.cols(); ++j) out(0, j) += a->value(i, j) / m;
  return a->graph->make(std::move(out), {a}, [a, m](Node& n) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n.value.cols(); ++j) a->grad(i, j) += n.grad(0, j) / m;
  });
}

Node* row_sum(Node* a) {
  Tensor out(a->value.rows(), 1);
  for (int i = 0; i < a->value.rows(); ++i)
    for (int j = 0; j < a->value.cols(); ++j) out(i, 0) += a->value(i, j);
  return a->graph->make(std::move(out), {a}, [a](Node& n) {
    for (int i = 0; i < a->value.rows(); ++i)
      for (int j = 0; j < a->value.cols(); ++j) a->grad(i, j) += n.grad(i, 0);
  });
}

Node* sum_all(Node* a) {
  Tensor out(1, 1);
  for (size_t i = 0; i < a->value.size(); ++i) out(0, 0) += a->value.data()[i];
  return a->graph->make(std::move(out), {a}, [a](Node& n) {
    for (size_t i = 0; i < a->value.size(); ++i) a->grad.data()[i] += n.grad(0, 0);
  });
}

Node* mean_all(Node* a) {
  const double count = static_cast<double>(a->value.size());
  return scale(sum_all(a), 1.0 / count);
}

Node* concat_cols(std::span<Node* const> parts) {
  if (parts.empty()) throw std::invalid_argument("concat of nothing");
  const int rows = parts[0]->value.rows();
  int cols = 0;
  for (Node* p : parts) {
    if (p->value.rows() != rows) throw std::invalid_argument("concat row mismatch");
    cols += p->value.cols();
  }
  Tensor out(rows, cols);
  int at = 0;
  for (Node* p : parts) {
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < p->value.cols(); ++j) out(i, at + j) = p->value(i, j);
    at += p->value.cols();
  }
  std::vector<Node*> parents(parts.begin(), parts.end());
  return parts[0]->graph->make(std::move(out), std::move(parents), [](Node& n) {
    int from = 0;
    for (Node* p : n.parents) {
      for (int i = 0; i < p->value.rows(); ++i)
        for (int j = 0; j < p->value.cols(); ++j) p->grad(i, j) += n.grad(i, from + j);
      from += p->value.cols();
    }
  });
}

Node* slice_cols(Node* a, int from, int len) {
  if (from < 0 || len < 0 || from + len > a->value.cols())
    throw std::invalid_argument("slice out of range");
  Tensor out(a->value.rows(), len);
  for (int i = 0; i < out.rows(); ++i)
    for (int j = 0; j < len; ++j) out(i, j) = a->value(i, from + j);
  return a->graph->make(std::move(out), {a}, [a, from, len](Node& n) {
    for (int i = 0; i < n.value.rows(); ++i)
      for (int j = 0; j < len; ++j) a->grad(i, from + j) += n.grad(i, j);
  });
}

Node* stack_rows(std::span<Node* const> rows) {
  if (rows.empty()) throw std::invalid_argument("stack of nothing");
  const int cols = rows[0]->value.cols();
  for (Node* r : rows) {
    if (r->value.rows() != 1 || r->value.cols() != cols)
      throw std::invalid_argument("stack_rows expects 1 x n rows of equal width");
  }
  Tensor out(static_cast<int>(rows.size()), cols);
  for (size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < cols; ++j) out(static_cast<int>(i), j) = rows[i]->value(0, j);
  std::vector<Node*> parents(rows.begin(), rows.end());
  return rows[0]->graph->make(std::move(out), std::move(parents), [](Node& n) {
    for (size_t i = 0; i < n.parents.size(); ++i)
      for (int j = 0; j < n.value.cols(); ++j)
        n.parents[i]->grad(0, j) += n.grad(static_cast<int>(i), j);
  });
}

}  // namespace eat::nn
