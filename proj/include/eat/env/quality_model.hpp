#pragma once

#include <utility>
#include <vector>

namespace eat::env {

/// Maps denoising step counts onto an image-quality score. Anchors hold a
/// piecewise-linear CLIP-score curve (strictly increasing in both
/// coordinates); evaluation clamps outside the anchor range and the result is
/// scaled by `weight`.
class QualityModel {
 public:
  /// Default anchors follow measured scores: saturation at 25 steps, a sharp
  /// drop below ~17.
  QualityModel();
  QualityModel(std::vector<std::pair<int, double>> anchors, double weight);

  double quality_of(int steps) const;

  double weight() const { return weight_; }
  const std::vector<std::pair<int, double>>& anchors() const { return anchors_; }

 private:
  std::vector<std::pair<int, double>> anchors_;
  double weight_ = 10.0;
};

}  // namespace eat::env
