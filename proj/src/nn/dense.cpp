#include "eat/nn/dense.hpp"

#include <cmath>

#include "eat/core/rng.hpp"

namespace eat::nn {

void init_uniform_fan_in(Tensor& t, int fan_in, std::mt19937_64& g) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  for (size_t i = 0; i < t.size(); ++i) t.data()[i] = core::rng::uniform(g, -bound, bound);
}

Node* apply_activation(Node* x, Activation a) {
  switch (a) {
    case Activation::Identity:
      return x;
    case Activation::Tanh:
      return tanh_op(x);
    case Activation::Mish:
      return mish(x);
  }
  return x;
}

DenseNet::DenseNet(std::vector<int> widths, Activation hidden, Activation output,
                   std::mt19937_64& g)
    : widths_(std::move(widths)) {
  if (widths_.size() < 2) throw std::invalid_argument("dense net needs at least two widths");
  for (size_t i = 0; i + 1 < widths_.size(); ++i) {
    Layer layer;
    layer.w = Parameter(Tensor(widths_[i], widths_[i + 1]));
    layer.b = Parameter(Tensor(1, widths_[i + 1]));
    init_uniform_fan_in(layer.w.value, widths_[i], g);
    init_uniform_fan_in(layer.b.value, widths_[i], g);
    layer.act = (i + 2 == widths_.size()) ? output : hidden;
    layers_.push_back(std::move(layer));
  }
}

Node* DenseNet::forward(Graph& g, Node* x) {
  if (x->value.cols() != in_dim()) throw std::invalid_argument("dense input width mismatch");
  Node* h = x;
  for (auto& layer : layers_) {
    h = add_rowvec(matmul(h, g.param(layer.w)), g.param(layer.b));
    h = apply_activation(h, layer.act);
  }
  return h;
}

namespace {

double stable_softplus(double x) {
  if (x > 20.0) return x;
  if (x < -20.0) return std::exp(x);
  return std::log1p(std::exp(x));
}

double activate_scalar(double x, Activation a) {
  switch (a) {
    case Activation::Identity:
      return x;
    case Activation::Tanh:
      return std::tanh(x);
    case Activation::Mish:
      return x * std::tanh(stable_softplus(x));
  }
  return x;
}

}  // namespace

Tensor DenseNet::predict(const Tensor& x) const {
  if (x.cols() != in_dim()) throw std::invalid_argument("dense input width mismatch");
  Tensor h = x;
  for (const auto& layer : layers_) {
    Tensor y = matmul(h, layer.w.value);
    for (int r = 0; r < y.rows(); ++r)
      for (int c = 0; c < y.cols(); ++c)
        y(r, c) = activate_scalar(y(r, c) + layer.b.value(0, c), layer.act);
    h = std::move(y);
  }
  return h;
}

void DenseNet::collect(const std::string& prefix, NamedParams& out) {
  for (size_t i = 0; i < layers_.size(); ++i) {
    out.emplace_back(prefix + "/w" + std::to_string(i), &layers_[i].w);
    out.emplace_back(prefix + "/b" + std::to_string(i), &layers_[i].b);
  }
}

}  // namespace eat::nn
