// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

#include "mimojscc/linalg.hpp"

namespace mimojscc {

/// h x w RGB image with values nominally in [0, 1], stored (y, x, channel) row-major.
struct Image {
  Eigen::Index height = 0;
  Eigen::Index width = 0;
  Eigen::ArrayXd pixels;

  Image() = default;
  Image(Eigen::Index h, Eigen::Index w) : height(h), width(w), pixels(Eigen::ArrayXd::Zero(3 * h * w)) {}

  double& at(Eigen::Index y, Eigen::Index x, Eigen::Index c) { return pixels(index(y, x, c)); }
  double at(Eigen::Index y, Eigen::Index x, Eigen::Index c) const { return pixels(index(y, x, c)); }
  Eigen::Index index(Eigen::Index y, Eigen::Index x, Eigen::Index c) const { return (y * width + x) * 3 + c; }
  Eigen::Index size() const { return pixels.size(); }

  friend bool operator==(const Image& a, const Image& b) {
    return a.height == b.height && a.width == b.width && (a.pixels == b.pixels).all();
  }
};

/// Splits an image into a p x p grid of patches: row i*p + j holds patch (i, j)
/// flattened (y, x, channel) row-major. Result is p^2 x (3hw / p^2).
RowMatrix patchify(const Image& image, Eigen::Index grid);
/// Inverse of patchify.
Image unpatchify(const Eigen::Ref<const RowMatrix>& patches, Eigen::Index height, Eigen::Index width, Eigen::Index grid);

/// Clamps every pixel to [0, 1].
Image clamp_unit(Image image);

}  // namespace mimojscc
