#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace eat::nn {

/// Dense row-major matrix of doubles. Vectors are 1 x n or n x 1.
class Tensor {
 public:
  Tensor() = default;
  Tensor(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative tensor shape");
  }

  static Tensor row(std::vector<double> v) {
    Tensor t;
    t.rows_ = 1;
    t.cols_ = static_cast<int>(v.size());
    t.data_ = std::move(v);
    return t;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  size_t size() const { return data_.size(); }
  bool same_shape(const Tensor& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  double& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  const double& operator()(int r, int c) const {
    return data_[static_cast<size_t>(r) * cols_ + c];
  }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::vector<double>& vec() { return data_; }
  const std::vector<double>& vec() const { return data_; }

  void fill(double v) { data_.assign(data_.size(), v); }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

/// C = op(A) * op(B), where op transposes when the flag is set.
Tensor matmul(const Tensor& a, const Tensor& b, bool trans_a = false, bool trans_b = false);

/// dst += src (same shape).
void add_inplace(Tensor& dst, const Tensor& src);

}  // namespace eat::nn
