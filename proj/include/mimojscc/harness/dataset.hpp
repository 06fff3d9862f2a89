// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mimojscc/image.hpp"

namespace mimojscc::harness {

struct Dataset {
  std::vector<Image> images;
  std::vector<std::string> names;
};

struct Split {
  std::vector<Image> train;
  std::vector<Image> validation;
};

/// Reads binary (P6) or ASCII (P3) PPM.
Image read_ppm(const std::filesystem::path& path);
void write_ppm(const std::filesystem::path& path, const Image& image);
Image read_png(const std::filesystem::path& path);

/// Center-crops to the target aspect ratio, then resamples bilinearly.
Image fit_image(const Image& image, Eigen::Index height, Eigen::Index width);

/// Every .png / .ppm file in `dir`, sorted by file name and fitted to height x width.
Dataset load_images(const std::filesystem::path& dir, Eigen::Index height, Eigen::Index width);

/// Seeded images cycling through smooth random fields, color gradients and checkerboards.
Dataset synth_dataset(std::size_t n, Eigen::Index height, Eigen::Index width, std::uint64_t seed);

/// True for the roughly 10% of indices that hash into the validation set.
bool is_validation_index(std::size_t index);
Split split_dataset(const Dataset& data);

}  // namespace mimojscc::harness
