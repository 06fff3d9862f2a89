// SPDX-License-Identifier: Apache-2.0
#include "mimojscc/symbol_layout.hpp"

#include <fmt/format.h>

namespace mimojscc {

Eigen::Index token_width(Eigen::Index antennas, Eigen::Index uses, Eigen::Index tokens) {
  const Eigen::Index total = 2 * antennas * uses;
  if (antennas < 1 || uses < 1 || tokens < 1 || total % tokens != 0) {
    throw ConfigError(fmt::format("sequence length {} does not divide 2*M*k = {}", tokens, total));
  }
  return total / tokens;
}

RowMatrix grid_to_tokens(const Eigen::Ref<const RowMatrix>& grid, Eigen::Index tokens) {
  if (grid.cols() % 2 != 0) throw DimensionError("grid_to_tokens: grid must have 2k columns");
  const Eigen::Index width = token_width(grid.rows(), grid.cols() / 2, tokens);
  RowMatrix out(tokens, width);
  Eigen::Map<RowMatrix>(out.data(), grid.rows(), grid.cols()) = grid;
  return out;
}

RowMatrix tokens_to_grid(const Eigen::Ref<const RowMatrix>& tokens, Eigen::Index antennas) {
  const Eigen::Index total = tokens.size();
  if (antennas < 1 || total % (2 * antennas) != 0) {
    throw DimensionError(fmt::format("tokens_to_grid: {} entries do not form {} antenna rows", total, antennas));
  }
  RowMatrix out(antennas, total / antennas);
  Eigen::Map<RowMatrix>(out.data(), tokens.rows(), tokens.cols()) = tokens;
  return out;
}

RowMatrix complex_to_grid(const ComplexMatrix& x) {
  RowMatrix out(x.rows(), 2 * x.cols());
  out.leftCols(x.cols()) = x.real();
  out.rightCols(x.cols()) = x.imag();
  return out;
}

ComplexMatrix grid_to_complex(const Eigen::Ref<const RowMatrix>& grid) {
  if (grid.cols() % 2 != 0) throw DimensionError("grid_to_complex: grid must have 2k columns");
  const Eigen::Index k = grid.cols() / 2;
  ComplexMatrix out(grid.rows(), k);
  out.real() = grid.leftCols(k);
  out.imag() = grid.rightCols(k);
  return out;
}

}  // namespace mimojscc
