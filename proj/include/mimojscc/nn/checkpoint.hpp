// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>

#include "mimojscc/nn/params.hpp"

namespace mimojscc::nn {

// Layout (all integers little-endian uint32):
//   "DJSCCM1" | schema version | parameter count |
//   per parameter: name length | name bytes | rank | dims... | float32 values (row-major)

inline constexpr char kCheckpointMagic[] = "DJSCCM1";

void save_checkpoint(const ParameterStore& store, std::ostream& out);
void save_checkpoint(const ParameterStore& store, const std::filesystem::path& path);

ParameterStore load_checkpoint(std::istream& in);
ParameterStore load_checkpoint(const std::filesystem::path& path);

/// Loads into an existing store, requiring identical names, order and shapes.
void load_checkpoint_into(ParameterStore& target, const std::filesystem::path& path);

}  // namespace mimojscc::nn
