// SPDX-License-Identifier: Apache-2.0
#include "mimojscc/nn/checkpoint.hpp"

#include <fmt/format.h>

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

namespace mimojscc::nn {
namespace {

constexpr std::size_t kMagicLength = sizeof(kCheckpointMagic) - 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> bytes{static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                                  static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes.data(), 4);
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) throw Error("checkpoint: truncated file");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

void save_checkpoint(const ParameterStore& store, std::ostream& out) {
  out.write(kCheckpointMagic, kMagicLength);
  put_u32(out, ParameterStore::kSchemaVersion);
  put_u32(out, static_cast<std::uint32_t>(store.size()));
  for (const auto& e : store.entries()) {
    put_u32(out, static_cast<std::uint32_t>(e.name.size()));
    out.write(e.name.data(), static_cast<std::streamsize>(e.name.size()));
    put_u32(out, static_cast<std::uint32_t>(e.shape.size()));
    for (auto d : e.shape) put_u32(out, d);
    const Matrix& v = e.tensor.value();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v.data()[i])));
    }
  }
  if (!out) throw Error("checkpoint: write failed");
}

void save_checkpoint(const ParameterStore& store, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("checkpoint: cannot open '{}' for writing", path.string()));
  save_checkpoint(store, out);
}

ParameterStore load_checkpoint(std::istream& in) {
  std::array<char, kMagicLength> magic{};
  if (!in.read(magic.data(), kMagicLength) || std::memcmp(magic.data(), kCheckpointMagic, kMagicLength) != 0) {
    throw Error("checkpoint: bad magic");
  }
  const auto version = get_u32(in);
  if (version != ParameterStore::kSchemaVersion) {
    throw Error(fmt::format("checkpoint: unsupported schema version {}", version));
  }
  const auto count = get_u32(in);
  ParameterStore store;
  for (std::uint32_t p = 0; p < count; ++p) {
    const auto name_length = get_u32(in);
    std::string name(name_length, '\0');
    if (!in.read(name.data(), name_length)) throw Error("checkpoint: truncated name");
    const auto rank = get_u32(in);
    if (rank == 0 || rank > 2) throw Error(fmt::format("checkpoint: parameter '{}' has unsupported rank {}", name, rank));
    std::vector<std::uint32_t> shape(rank);
    for (auto& d : shape) d = get_u32(in);
    const Eigen::Index rows = rank == 2 ? shape[0] : 1;
    const Eigen::Index cols = rank == 2 ? shape[1] : shape[0];
    Matrix value(rows, cols);
    for (Eigen::Index i = 0; i < value.size(); ++i) {
      value.data()[i] = static_cast<double>(std::bit_cast<float>(get_u32(in)));
    }
    store.add(std::move(name), std::move(value), std::move(shape));
  }
  return store;
}

ParameterStore load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("checkpoint: cannot open '{}'", path.string()));
  return load_checkpoint(in);
}

void load_checkpoint_into(ParameterStore& target, const std::filesystem::path& path) {
  target.assign_from(load_checkpoint(path));
}

}  // namespace mimojscc::nn
