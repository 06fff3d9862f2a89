// SPDX-License-Identifier: Apache-2.0
#include "mimojscc/linalg.hpp"

namespace mimojscc {

ComplexMatrix sample_complex_gaussian(RngStream& rng, Eigen::Index rows, Eigen::Index cols, double variance) {
  if (!(variance >= 0.0)) throw ArgumentError("sample_complex_gaussian: negative variance");
  if (rows < 0 || cols < 0) throw DimensionError("sample_complex_gaussian: negative extent");
  const double scale = std::sqrt(variance / 2.0);
  ComplexMatrix out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const auto [re, im] = rng.normal_pair();
      out(i, j) = {scale * re, scale * im};
    }
  }
  return out;
}

RealMatrix realify(const ComplexMatrix& a) {
  const auto r = a.rows();
  const auto c = a.cols();
  RealMatrix out(2 * r, 2 * c);
  out.topLeftCorner(r, c) = a.real();
  out.topRightCorner(r, c) = -a.imag();
  out.bottomLeftCorner(r, c) = a.imag();
  out.bottomRightCorner(r, c) = a.real();
  return out;
}

RealMatrix stack_real_imag(const ComplexMatrix& a) {
  RealMatrix out(2 * a.rows(), a.cols());
  out.topRows(a.rows()) = a.real();
  out.bottomRows(a.rows()) = a.imag();
  return out;
}

ComplexMatrix unstack_real_imag(const Eigen::Ref<const RealMatrix>& stacked) {
  if (stacked.rows() % 2 != 0) throw DimensionError("unstack_real_imag: odd row count");
  const auto r = stacked.rows() / 2;
  ComplexMatrix out(r, stacked.cols());
  out.real() = stacked.topRows(r);
  out.imag() = stacked.bottomRows(r);
  return out;
}

}  // namespace mimojscc
