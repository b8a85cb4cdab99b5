#include "eat/env/quality_model.hpp"

#include <stdexcept>

namespace eat::env {

QualityModel::QualityModel()
    : QualityModel({{10, 0.180}, {17, 0.240}, {20, 0.251}, {25, 0.270}}, 10.0) {}

QualityModel::QualityModel(std::vector<std::pair<int, double>> anchors, double weight)
    : anchors_(std::move(anchors)), weight_(weight) {
  if (anchors_.empty()) throw std::invalid_argument("quality anchors must not be empty");
  for (size_t i = 1; i < anchors_.size(); ++i) {
    if (anchors_[i].first <= anchors_[i - 1].first || anchors_[i].second <= anchors_[i - 1].second)
      throw std::invalid_argument("quality anchors must be strictly increasing");
  }
}

double QualityModel::quality_of(int steps) const {
  if (steps <= anchors_.front().first) return weight_ * anchors_.front().second;
  if (steps >= anchors_.back().first) return weight_ * anchors_.back().second;
  for (size_t i = 1; i < anchors_.size(); ++i) {
    if (steps <= anchors_[i].first) {
      const auto& [x0, y0] = anchors_[i - 1];
      const auto& [x1, y1] = anchors_[i];
      const double t = static_cast<double>(steps - x0) / static_cast<double>(x1 - x0);
      return weight_ * (y0 + t * (y1 - y0));
    }
  }
  return weight_ * anchors_.back().second;  // unreachable
}

}  // namespace eat::env
