#include "eat/nn/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace eat::nn {

namespace {

constexpr char kMagic[8] = {'E', 'A', 'T', 'C', 'K', 'P', 'T', '1'};

void write_u32(std::ostream& out, std::uint32_t v) {
  char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf, 4);
}

std::uint32_t read_u32(std::istream& in) {
  unsigned char buf[4];
  in.read(reinterpret_cast<char*>(buf), 4);
  if (!in) throw std::runtime_error("checkpoint truncated");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
  return v;
}

}  // namespace

void Checkpoint::save(std::ostream& out) const {
  out.write(kMagic, sizeof(kMagic));
  write_u32(out, version);
  write_u32(out, static_cast<std::uint32_t>(tensors.size()));
  for (const auto& [name, t] : tensors) {
    write_u32(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_u32(out, static_cast<std::uint32_t>(t.rows()));
    write_u32(out, static_cast<std::uint32_t>(t.cols()));
    out.write(reinterpret_cast<const char*>(t.data()),
              static_cast<std::streamsize>(t.size() * sizeof(double)));
  }
  if (!out) throw std::runtime_error("checkpoint write failed");
}

void Checkpoint::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path);
  save(out);
}

Checkpoint Checkpoint::load(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("not a checkpoint file (bad magic)");
  Checkpoint ck;
  ck.version = read_u32(in);
  if (ck.version != 1) throw std::runtime_error("unsupported checkpoint version");
  const std::uint32_t count = read_u32(in);
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint32_t name_len = read_u32(in);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    const std::uint32_t rows = read_u32(in);
    const std::uint32_t cols = read_u32(in);
    Tensor t(static_cast<int>(rows), static_cast<int>(cols));
    in.read(reinterpret_cast<char*>(t.data()),
            static_cast<std::streamsize>(t.size() * sizeof(double)));
    if (!in) throw std::runtime_error("checkpoint truncated");
    ck.tensors.emplace_back(std::move(name), std::move(t));
  }
  return ck;
}

Checkpoint Checkpoint::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  return load(in);
}

const Tensor* Checkpoint::find(const std::string& name) const {
  for (const auto& [n, t] : tensors) {
    if (n == name) return &t;
  }
  return nullptr;
}

Checkpoint snapshot(const NamedParams& params) {
  Checkpoint ck;
  ck.tensors.reserve(params.size());
  for (const auto& [name, p] : params) ck.tensors.emplace_back(name, p->value);
  return ck;
}

void restore(const Checkpoint& ckpt, const NamedParams& params) {
  for (const auto& [name, p] : params) {
    const Tensor* t = ckpt.find(name);
    if (t == nullptr) throw std::runtime_error("checkpoint missing tensor: " + name);
    if (t->rows() != p->value.rows() || t->cols() != p->value.cols())
      throw std::runtime_error("checkpoint shape mismatch for tensor: " + name);
    p->value = *t;
    p->zero_grad();
  }
}

}  // namespace eat::nn
