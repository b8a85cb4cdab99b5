#include "eat/nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace eat::nn {

GradCheckResult gradient_check(const std::function<Node*(Graph&)>& build,
                               std::span<Parameter* const> params, double h,
                               int max_coords_per_param, std::uint64_t seed) {
  // Analytic pass.
  std::vector<Tensor> saved_grads;
  for (Parameter* p : params) {
    saved_grads.push_back(p->grad);
    p->zero_grad();
  }
  {
    Graph g;
    g.backward(build(g));
  }
  std::vector<Tensor> analytic;
  for (Parameter* p : params) analytic.push_back(p->grad);

  auto eval = [&]() {
    Graph g;
    return build(g)->value(0, 0);
  };

  GradCheckResult result;
  std::mt19937_64 rng(seed);
  for (size_t pi = 0; pi < params.size(); ++pi) {
    Parameter& p = *params[pi];
    const size_t n = p.value.size();
    std::vector<size_t> coords(n);
    std::iota(coords.begin(), coords.end(), size_t{0});
    if (static_cast<int>(n) > max_coords_per_param) {
      std::shuffle(coords.begin(), coords.end(), rng);
      coords.resize(static_cast<size_t>(max_coords_per_param));
    }
    for (size_t c : coords) {
      const double x0 = p.value.data()[c];
      const double step = h * std::max(1.0, std::abs(x0));
      p.value.data()[c] = x0 + step;
      const double fp = eval();
      p.value.data()[c] = x0 - step;
      const double fm = eval();
      p.value.data()[c] = x0;
      const double gn = (fp - fm) / (2.0 * step);
      const double ga = analytic[pi].data()[c];
      const double abs_err = std::abs(ga - gn);
      const double rel_err = abs_err / std::max(1.0, std::abs(ga) + std::abs(gn));
      result.max_abs_error = std::max(result.max_abs_error, abs_err);
      result.max_rel_error = std::max(result.max_rel_error, rel_err);
      ++result.coords_checked;
    }
  }

  for (size_t pi = 0; pi < params.size(); ++pi) params[pi]->grad = saved_grads[pi];
  return result;
}

}  // namespace eat::nn
