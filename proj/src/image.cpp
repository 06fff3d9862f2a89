// SPDX-License-Identifier: Apache-2.0
#include "mimojscc/image.hpp"

#include <fmt/format.h>

namespace mimojscc {
namespace {

void check_grid(Eigen::Index height, Eigen::Index width, Eigen::Index grid) {
  if (grid < 1 || height % grid != 0 || width % grid != 0) {
    throw ConfigError(fmt::format("patch grid {} does not divide image {}x{}", grid, height, width));
  }
}

}  // namespace

RowMatrix patchify(const Image& image, Eigen::Index grid) {
  check_grid(image.height, image.width, grid);
  const Eigen::Index ph = image.height / grid;
  const Eigen::Index pw = image.width / grid;
  RowMatrix out(grid * grid, ph * pw * 3);
  for (Eigen::Index gi = 0; gi < grid; ++gi) {
    for (Eigen::Index gj = 0; gj < grid; ++gj) {
      Eigen::Index col = 0;
      for (Eigen::Index y = 0; y < ph; ++y) {
        for (Eigen::Index x = 0; x < pw; ++x) {
          for (Eigen::Index c = 0; c < 3; ++c) out(gi * grid + gj, col++) = image.at(gi * ph + y, gj * pw + x, c);
        }
      }
    }
  }
  return out;
}

Image unpatchify(const Eigen::Ref<const RowMatrix>& patches, Eigen::Index height, Eigen::Index width,
                 Eigen::Index grid) {
  check_grid(height, width, grid);
  const Eigen::Index ph = height / grid;
  const Eigen::Index pw = width / grid;
  if (patches.rows() != grid * grid || patches.cols() != ph * pw * 3) {
    throw DimensionError(fmt::format("unpatchify: expected {}x{} patches, got {}x{}", grid * grid, ph * pw * 3,
                                     patches.rows(), patches.cols()));
  }
  Image out(height, width);
  for (Eigen::Index gi = 0; gi < grid; ++gi) {
    for (Eigen::Index gj = 0; gj < grid; ++gj) {
      Eigen::Index col = 0;
      for (Eigen::Index y = 0; y < ph; ++y) {
        for (Eigen::Index x = 0; x < pw; ++x) {
          for (Eigen::Index c = 0; c < 3; ++c) out.at(gi * ph + y, gj * pw + x, c) = patches(gi * grid + gj, col++);
        }
      }
    }
  }
  return out;
}

Image clamp_unit(Image image) {
  image.pixels = image.pixels.cwiseMax(0.0).cwiseMin(1.0);
  return image;
}

}  // namespace mimojscc
