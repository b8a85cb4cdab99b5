#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "eat/nn/graph.hpp"
#include "eat/nn/tensor.hpp"

namespace eat::nn {

/// Named-tensor container with a versioned binary layout:
///   magic "EATCKPT1", u32 version, u32 tensor count,
///   then per tensor: u32 name length, name bytes, u32 rows, u32 cols,
///   rows*cols little-endian doubles.
/// Round-trips byte-exactly.
struct Checkpoint {
  std::uint32_t version = 1;
  std::vector<std::pair<std::string, Tensor>> tensors;

  void save(std::ostream& out) const;
  void save_file(const std::string& path) const;
  static Checkpoint load(std::istream& in);
  static Checkpoint load_file(const std::string& path);

  const Tensor* find(const std::string& name) const;
};

/// Copies current parameter values into a checkpoint.
Checkpoint snapshot(const NamedParams& params);

/// Writes checkpoint values back into the named parameters. Every parameter
/// must be present with a matching shape; extra checkpoint entries are
/// ignored.
void restore(const Checkpoint& ckpt, const NamedParams& params);

}  // namespace eat::nn
