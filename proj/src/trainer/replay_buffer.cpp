#include "eat/trainer/replay_buffer.hpp"

#include <numeric>
#include <stdexcept>
#include <utility>

#include "eat/core/rng.hpp"

namespace eat::trainer {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay buffer capacity must be positive");
}

void ReplayBuffer::push(core::Experience e) {
  if (data_.size() < capacity_) {
    data_.push_back(std::move(e));
    return;
  }
  data_[write_] = std::move(e);
  write_ = (write_ + 1) % capacity_;
}

std::vector<const core::Experience*> ReplayBuffer::sample(std::size_t k,
                                                          std::mt19937_64& g) const {
  if (k > data_.size())
    throw std::invalid_argument("cannot sample more transitions than the buffer holds");
  // Partial Fisher-Yates: after j swaps the prefix holds a uniform
  // without-replacement draw of size j.
  std::vector<std::size_t> idx(data_.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::vector<const core::Experience*> out;
  out.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t span = idx.size() - j;
    const auto offset = static_cast<std::size_t>(core::rng::uniform01(g) * static_cast<double>(span));
    std::swap(idx[j], idx[j + std::min(offset, span - 1)]);
    out.push_back(&data_[idx[j]]);
  }
  return out;
}

}  // namespace eat::trainer
