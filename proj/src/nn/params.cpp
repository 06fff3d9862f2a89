// SPDX-License-Identifier: Apache-2.0
#include "mimojscc/nn/params.hpp"

#include <fmt/format.h>

namespace mimojscc::nn {

Tensor& ParameterStore::add(std::string name, Matrix init, std::vector<std::uint32_t> shape) {
  if (index_.contains(name)) throw ConfigError(fmt::format("duplicate parameter '{}'", name));
  if (shape.empty()) shape = {static_cast<std::uint32_t>(init.rows()), static_cast<std::uint32_t>(init.cols())};
  std::size_t count = 1;
  for (auto d : shape) count *= d;
  if (count != static_cast<std::size_t>(init.size())) {
    throw DimensionError(fmt::format("parameter '{}': shape does not match value size", name));
  }
  index_.emplace(name, entries_.size());
  entries_.push_back(Entry{std::move(name), std::move(shape), Tensor::parameter(std::move(init))});
  return entries_.back().tensor;
}

Tensor& ParameterStore::at(const std::string& name) {
  auto it = index_.find(name);
  if (it == index_.end()) throw ConfigError(fmt::format("unknown parameter '{}'", name));
  return entries_[it->second].tensor;
}

const Tensor& ParameterStore::at(const std::string& name) const {
  return const_cast<ParameterStore*>(this)->at(name);
}

std::size_t ParameterStore::scalar_count() const {
  std::size_t n = 0;
  for (const auto& e : entries_) n += static_cast<std::size_t>(e.tensor.value().size());
  return n;
}

void ParameterStore::zero_grad() {
  for (auto& e : entries_) e.tensor.zero_grad();
}

void ParameterStore::clear_grad() {
  for (auto& e : entries_) e.tensor.clear_grad();
}

ParameterStore ParameterStore::clone() const {
  ParameterStore out;
  for (const auto& e : entries_) out.add(e.name, e.tensor.value(), e.shape);
  return out;
}

ParameterStore ParameterStore::frozen() const {
  ParameterStore out;
  out.index_ = index_;
  out.entries_.reserve(entries_.size());
  for (const auto& e : entries_) out.entries_.push_back(Entry{e.name, e.shape, Tensor::constant(e.tensor.value())});
  return out;
}

void ParameterStore::assign_from(const ParameterStore& other) {
  if (other.size() != size()) throw ConfigError("assign_from: parameter counts differ");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& src = other.entries_[i];
    auto& dst = entries_[i];
    if (src.name != dst.name || src.shape != dst.shape) {
      throw ConfigError(fmt::format("assign_from: parameter '{}' does not match '{}'", dst.name, src.name));
    }
    dst.tensor.mutable_value() = src.tensor.value();
  }
}

Matrix uniform_init(RngStream& rng, Eigen::Index fan_in, Eigen::Index fan_out) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(std::max<Eigen::Index>(fan_in, 1)));
  Matrix out(fan_in, fan_out);
  for (Eigen::Index i = 0; i < out.size(); ++i) out.data()[i] = rng.uniform(-bound, bound);
  return out;
}

}  // namespace mimojscc::nn
