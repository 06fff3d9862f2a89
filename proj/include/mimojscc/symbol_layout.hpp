// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mimojscc/linalg.hpp"

namespace mimojscc {

// The one layout shared by the symbol packer and the heatmap builder: a
// complex M x k block is written as the real M x 2k grid [Re | Im] and the
// grid is reshaped row-major into l tokens of width 2Mk / l.

/// Width of one token, validating that l divides 2 M k.
Eigen::Index token_width(Eigen::Index antennas, Eigen::Index uses, Eigen::Index tokens);

/// Real M x 2k grid -> l x (2Mk / l) tokens.
RowMatrix grid_to_tokens(const Eigen::Ref<const RowMatrix>& grid, Eigen::Index tokens);
/// l x (2Mk / l) tokens -> real M x 2k grid.
RowMatrix tokens_to_grid(const Eigen::Ref<const RowMatrix>& tokens, Eigen::Index antennas);

/// Complex M x k -> real M x 2k [Re | Im].
RowMatrix complex_to_grid(const ComplexMatrix& x);
/// Real M x 2k [Re | Im] -> complex M x k.
ComplexMatrix grid_to_complex(const Eigen::Ref<const RowMatrix>& grid);

}  // namespace mimojscc
