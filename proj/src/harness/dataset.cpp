// SPDX-License-Identifier: Apache-2.0
#include "mimojscc/harness/dataset.hpp"

#include <fmt/format.h>
#include <png.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>

namespace mimojscc::harness {
namespace fs = std::filesystem;
namespace {

constexpr std::uint64_t kSynthStream = 0x5359;

// Next whitespace-separated PPM header token, skipping # comments.
std::string header_token(std::istream& in) {
  std::string token;
  char ch = 0;
  while (in.get(ch)) {
    if (ch == '#') {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(ch);
  }
  return token;
}

long header_number(std::istream& in, const fs::path& path) {
  const std::string token = header_token(in);
  try {
    std::size_t used = 0;
    const long v = std::stol(token, &used);
    if (used == token.size() && v > 0) return v;
  } catch (const std::exception&) {
  }
  throw ArgumentError(fmt::format("{}: bad PPM header field '{}'", path.string(), token));
}

std::string lower_extension(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

}  // namespace

Image read_ppm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError(fmt::format("cannot open {}", path.string()));
  const std::string magic = header_token(in);
  if (magic != "P6" && magic != "P3") throw ArgumentError(fmt::format("{}: not a P3/P6 PPM file", path.string()));
  const long width = header_number(in, path);
  const long height = header_number(in, path);
  const long maxval = header_number(in, path);
  if (maxval < 1 || maxval > 65535) {
    throw ArgumentError(fmt::format("{}: PPM maxval {} out of range", path.string(), maxval));
  }

  Image image(height, width);
  const auto peak = static_cast<double>(maxval);
  if (magic == "P3") {
    for (Eigen::Index i = 0; i < image.size(); ++i) {
      long v = -1;
      if (!(in >> v) || v < 0 || v > maxval) throw ArgumentError(fmt::format("{}: truncated PPM data", path.string()));
      image.pixels(i) = static_cast<double>(v) / peak;
    }
    return image;
  }
  const int bytes = maxval < 256 ? 1 : 2;
  std::vector<unsigned char> raw(static_cast<std::size_t>(image.size() * bytes));
  if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()))) {
    throw ArgumentError(fmt::format("{}: truncated PPM data", path.string()));
  }
  for (Eigen::Index i = 0; i < image.size(); ++i) {
    const auto at = static_cast<std::size_t>(i * bytes);
    const unsigned v = bytes == 1 ? raw[at] : (static_cast<unsigned>(raw[at]) << 8) | raw[at + 1];
    image.pixels(i) = std::min(1.0, static_cast<double>(v) / peak);
  }
  return image;
}

void write_ppm(const fs::path& path, const Image& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError(fmt::format("cannot write {}", path.string()));
  out << "P6\n" << image.width << ' ' << image.height << "\n255\n";
  for (Eigen::Index i = 0; i < image.size(); ++i) {
    out.put(static_cast<char>(std::lround(std::clamp(image.pixels(i), 0.0, 1.0) * 255.0)));
  }
}

Image read_png(const fs::path& path) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.string().c_str())) {
    throw ArgumentError(fmt::format("{}: {}", path.string(), png.message));
  }
  png.format = PNG_FORMAT_RGB;
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, buffer.data(), 0, nullptr)) {
    const std::string message = png.message;
    png_image_free(&png);
    throw ArgumentError(fmt::format("{}: {}", path.string(), message));
  }
  Image image(png.height, png.width);
  for (Eigen::Index i = 0; i < image.size(); ++i) image.pixels(i) = buffer[static_cast<std::size_t>(i)] / 255.0;
  return image;
}

Image fit_image(const Image& image, Eigen::Index height, Eigen::Index width) {
  if (image.height == height && image.width == width) return image;
  if (image.height < 1 || image.width < 1) throw ArgumentError("fit_image: empty image");
  // Largest centered window with the target aspect ratio.
  double crop_h = static_cast<double>(image.height);
  double crop_w = crop_h * static_cast<double>(width) / static_cast<double>(height);
  if (crop_w > static_cast<double>(image.width)) {
    crop_w = static_cast<double>(image.width);
    crop_h = crop_w * static_cast<double>(height) / static_cast<double>(width);
  }
  const double y0 = 0.5 * (static_cast<double>(image.height) - crop_h);
  const double x0 = 0.5 * (static_cast<double>(image.width) - crop_w);

  Image out(height, width);
  for (Eigen::Index y = 0; y < height; ++y) {
    const double sy = std::clamp(y0 + (static_cast<double>(y) + 0.5) * crop_h / static_cast<double>(height) - 0.5, 0.0,
                                 static_cast<double>(image.height - 1));
    const auto iy = static_cast<Eigen::Index>(sy);
    const auto jy = std::min(iy + 1, image.height - 1);
    const double fy = sy - static_cast<double>(iy);
    for (Eigen::Index x = 0; x < width; ++x) {
      const double sx = std::clamp(x0 + (static_cast<double>(x) + 0.5) * crop_w / static_cast<double>(width) - 0.5,
                                   0.0, static_cast<double>(image.width - 1));
      const auto ix = static_cast<Eigen::Index>(sx);
      const auto jx = std::min(ix + 1, image.width - 1);
      const double fx = sx - static_cast<double>(ix);
      for (Eigen::Index c = 0; c < 3; ++c) {
        const double top = (1 - fx) * image.at(iy, ix, c) + fx * image.at(iy, jx, c);
        const double bottom = (1 - fx) * image.at(jy, ix, c) + fx * image.at(jy, jx, c);
        out.at(y, x, c) = (1 - fy) * top + fy * bottom;
      }
    }
  }
  return out;
}

Dataset load_images(const fs::path& dir, Eigen::Index height, Eigen::Index width) {
  if (!fs::is_directory(dir)) throw ArgumentError(fmt::format("{} is not a directory", dir.string()));
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = lower_extension(entry.path());
    if (ext == ".png" || ext == ".ppm") files.push_back(entry.path());
  }
  if (files.empty()) throw ArgumentError(fmt::format("{} contains no .png or .ppm images", dir.string()));
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });

  Dataset data;
  for (const auto& file : files) {
    const Image raw = lower_extension(file) == ".png" ? read_png(file) : read_ppm(file);
    data.images.push_back(fit_image(raw, height, width));
    data.names.push_back(file.filename().string());
  }
  return data;
}

Dataset synth_dataset(std::size_t n, Eigen::Index height, Eigen::Index width, std::uint64_t seed) {
  if (height < 1 || width < 1) throw ArgumentError("synth_dataset: image size must be positive");
  Dataset data;
  const RngStream base(seed, kSynthStream);
  for (std::size_t i = 0; i < n; ++i) {
    RngStream rng = base.derive(i);
    Image image(height, width);
    const double h = static_cast<double>(height);
    const double w = static_cast<double>(width);
    switch (i % 3) {
      case 0: {  // smooth field: a few random low-frequency waves per channel
        for (Eigen::Index c = 0; c < 3; ++c) {
          const double base_level = rng.uniform(0.3, 0.7);
          std::array<std::array<double, 4>, 3> waves{};
          for (auto& wave : waves) wave = {rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0), rng.uniform(0.0, 6.3), rng.uniform(0.05, 0.15)};
          for (Eigen::Index y = 0; y < height; ++y) {
            for (Eigen::Index x = 0; x < width; ++x) {
              double v = base_level;
              for (const auto& [fy, fx, phase, amp] : waves) {
                v += amp * std::sin(std::numbers::pi * (fy * static_cast<double>(y) / h + fx * static_cast<double>(x) / w) * 2.0 + phase);
              }
              image.at(y, x, c) = v;
            }
          }
        }
        break;
      }
      case 1: {  // linear gradient between two colors
        const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
        std::array<double, 3> from{}, to{};
        for (auto& v : from) v = rng.uniform();
        for (auto& v : to) v = rng.uniform();
        for (Eigen::Index y = 0; y < height; ++y) {
          for (Eigen::Index x = 0; x < width; ++x) {
            const double t = 0.5 + 0.5 * (std::cos(angle) * (2.0 * static_cast<double>(x) / w - 1.0) +
                                          std::sin(angle) * (2.0 * static_cast<double>(y) / h - 1.0)) / std::numbers::sqrt2;
            for (Eigen::Index c = 0; c < 3; ++c) image.at(y, x, c) = (1 - t) * from[c] + t * to[c];
          }
        }
        break;
      }
      default: {  // checkerboard of two colors
        const auto cell = rng.uniform_int(1, std::max<Eigen::Index>(1, std::min(height, width) / 2));
        std::array<double, 3> a{}, b{};
        for (auto& v : a) v = rng.uniform();
        for (auto& v : b) v = rng.uniform();
        for (Eigen::Index y = 0; y < height; ++y) {
          for (Eigen::Index x = 0; x < width; ++x) {
            const bool odd = ((y / cell) + (x / cell)) % 2 != 0;
            for (Eigen::Index c = 0; c < 3; ++c) image.at(y, x, c) = odd ? a[c] : b[c];
          }
        }
        break;
      }
    }
    data.images.push_back(clamp_unit(std::move(image)));
    data.names.push_back(fmt::format("synth_{:05d}", i));
  }
  return data;
}

bool is_validation_index(std::size_t index) { return splitmix64(static_cast<std::uint64_t>(index)) % 10 == 0; }

Split split_dataset(const Dataset& data) {
  Split out;
  for (std::size_t i = 0; i < data.images.size(); ++i) {
    (is_validation_index(i) ? out.validation : out.train).push_back(data.images[i]);
  }
  return out;
}

}  // namespace mimojscc::harness
