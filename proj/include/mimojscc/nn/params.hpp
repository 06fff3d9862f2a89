// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "mimojscc/nn/tensor.hpp"

namespace mimojscc::nn {

/// Named trainable tensors in insertion order.
class ParameterStore {
 public:
  static constexpr std::uint32_t kSchemaVersion = 1;

  struct Entry {
    std::string name;
    std::vector<std::uint32_t> shape;  // logical shape; biases are rank 1
    Tensor tensor;
  };

  /// Registers a parameter. `shape` defaults to {rows, cols}.
  Tensor& add(std::string name, Matrix init, std::vector<std::uint32_t> shape = {});

  bool contains(const std::string& name) const { return index_.contains(name); }
  Tensor& at(const std::string& name);
  const Tensor& at(const std::string& name) const;

  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t scalar_count() const;

  void zero_grad();
  void clear_grad();

  /// Independent copy of names, shapes and values (no gradients).
  ParameterStore clone() const;
  /// Same values held as constants, for graph-free evaluation on any thread.
  ParameterStore frozen() const;
  /// Copies values from a store with identical names and shapes.
  void assign_from(const ParameterStore& other);

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)].
Matrix uniform_init(RngStream& rng, Eigen::Index fan_in, Eigen::Index fan_out);

}  // namespace mimojscc::nn
