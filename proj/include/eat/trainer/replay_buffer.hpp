#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "eat/core/types.hpp"

namespace eat::trainer {

/// Fixed-capacity transition store; once full, new pushes overwrite the
/// oldest entries in ring order.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity = 1'000'000);

  void push(core::Experience e);

  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }
  const core::Experience& at(std::size_t i) const { return data_.at(i); }

  /// Uniform sample of k distinct transitions (k <= size). The returned
  /// pointers stay valid until the next push.
  std::vector<const core::Experience*> sample(std::size_t k, std::mt19937_64& g) const;

 private:
  std::size_t capacity_;
  std::vector<core::Experience> data_;
  std::size_t write_ = 0;  // ring head once data_ reaches capacity
};

}  // namespace eat::trainer
