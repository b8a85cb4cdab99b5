#include "eat/nn/tensor.hpp"

namespace eat::nn {

Tensor matmul(const Tensor& a, const Tensor& b, bool trans_a, bool trans_b) {
  const int m = trans_a ? a.cols() : a.rows();
  const int kk = trans_a ? a.rows() : a.cols();
  const int kb = trans_b ? b.cols() : b.rows();
  const int n = trans_b ? b.rows() : b.cols();
  if (kk != kb) throw std::invalid_argument("matmul inner dimensions differ");

  Tensor c(m, n);
  if (!trans_a && !trans_b) {
    for (int i = 0; i < m; ++i) {
      double* ci = &c(i, 0);
      for (int k = 0; k < kk; ++k) {
        const double aik = a(i, k);
        const double* bk = &b(k, 0);
        for (int j = 0; j < n; ++j) ci[j] += aik * bk[j];
      }
    }
  } else if (!trans_a && trans_b) {
    for (int i = 0; i < m; ++i) {
      const double* ai = &a(i, 0);
      for (int j = 0; j < n; ++j) {
        const double* bj = &b(j, 0);
        double s = 0;
        for (int k = 0; k < kk; ++k) s += ai[k] * bj[k];
        c(i, j) = s;
      }
    }
  } else if (trans_a && !trans_b) {
    for (int k = 0; k < kk; ++k) {
      const double* ak = &a(k, 0);
      const double* bk = &b(k, 0);
      for (int i = 0; i < m; ++i) {
        const double aki = ak[i];
        double* ci = &c(i, 0);
        for (int j = 0; j < n; ++j) ci[j] += aki * bk[j];
      }
    }
  } else {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        double s = 0;
        for (int k = 0; k < kk; ++k) s += a(k, i) * b(j, k);
        c(i, j) = s;
      }
    }
  }
  return c;
}

void add_inplace(Tensor& dst, const Tensor& src) {
  if (!dst.same_shape(src)) throw std::invalid_argument("shape mismatch in add");
  double* d = dst.data();
  const double* s = src.data();
  for (size_t i = 0; i < dst.size(); ++i) d[i] += s[i];
}

}  // namespace eat::nn
