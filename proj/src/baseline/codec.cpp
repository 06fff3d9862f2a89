// SPDX-License-Identifier: Apache-2.0
#include "mimojscc/baseline/codec.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "mimojscc/harness/dataset.hpp"
#include "mimojscc/harness/metrics.hpp"

namespace mimojscc::baseline {
namespace {

constexpr int kBlock = 8;
using Block = Eigen::Matrix<double, kBlock, kBlock>;

const Block& dct_basis() {
  static const Block basis = [] {
    Block c;
    for (int u = 0; u < kBlock; ++u) {
      const double alpha = std::sqrt((u == 0 ? 1.0 : 2.0) / kBlock);
      for (int x = 0; x < kBlock; ++x) c(u, x) = alpha * std::cos((2 * x + 1) * u * std::numbers::pi / (2 * kBlock));
    }
    return c;
  }();
  return basis;
}

// (row, col) pairs in JPEG zigzag order.
const std::array<std::pair<int, int>, kBlock * kBlock>& zigzag() {
  static const auto order = [] {
    std::array<std::pair<int, int>, kBlock * kBlock> out{};
    int n = 0;
    for (int s = 0; s < 2 * kBlock - 1; ++s) {
      for (int i = 0; i <= s; ++i) {
        const int r = s % 2 == 0 ? s - i : i;
        const int c = s - r;
        if (r < kBlock && c < kBlock) out[static_cast<std::size_t>(n++)] = {r, c};
      }
    }
    return out;
  }();
  return order;
}

// DC of a [0, 1] block lies in [0, 8]: mid-rise with 2^b cells.
double quantize_dc(double v, int bits) {
  const double levels = std::ldexp(1.0, bits);
  const double step = 8.0 / levels;
  const double idx = std::clamp(std::floor(v / step), 0.0, levels - 1.0);
  return (idx + 0.5) * step;
}

// AC in [-4, 4]: mid-tread with 2^b - 1 levels, so zero is exact.
double quantize_ac(double v, int bits) {
  const double half = std::ldexp(1.0, bits - 1) - 1.0;
  const double step = 4.0 / half;
  return std::clamp(std::round(v / step), -half, half) * step;
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

}  // namespace

std::vector<RdPoint> upper_envelope(std::vector<RdPoint> points) {
  std::sort(points.begin(), points.end(), [](const RdPoint& a, const RdPoint& b) {
    return a.bpp < b.bpp || (a.bpp == b.bpp && a.psnr_db > b.psnr_db);
  });
  std::vector<RdPoint> out;
  for (const auto& p : points) {
    if (!out.empty() && p.bpp == out.back().bpp) continue;
    const double psnr = out.empty() ? p.psnr_db : std::max(p.psnr_db, out.back().psnr_db);
    out.push_back({p.bpp, psnr});
  }
  return out;
}

std::vector<DctRung> default_ladder() {
  std::vector<DctRung> ladder;
  for (int m : {1, 2, 4, 8, 16, 32, 64}) {
    for (int b : {2, 4, 8}) ladder.push_back({m, b});
  }
  return ladder;
}

Image ToyDctCodec::reconstruct(const Image& image, const DctRung& rung) const {
  if (image.height % kBlock != 0 || image.width % kBlock != 0 || image.height == 0 || image.width == 0) {
    throw DimensionError(fmt::format("toy codec needs sides that are multiples of 8, got {}x{}", image.height, image.width));
  }
  if (rung.coefficients < 1 || rung.coefficients > kBlock * kBlock || rung.bits < 2 || rung.bits > 16) {
    throw ArgumentError(fmt::format("invalid codec rung m={} b={}", rung.coefficients, rung.bits));
  }
  const Block& c = dct_basis();
  const auto& order = zigzag();
  Image out(image.height, image.width);
  for (Eigen::Index by = 0; by < image.height; by += kBlock) {
    for (Eigen::Index bx = 0; bx < image.width; bx += kBlock) {
      for (Eigen::Index ch = 0; ch < 3; ++ch) {
        Block block;
        for (int y = 0; y < kBlock; ++y) {
          for (int x = 0; x < kBlock; ++x) block(y, x) = image.at(by + y, bx + x, ch);
        }
        const Block coeffs = c * block * c.transpose();
        Block kept = Block::Zero();
        for (int i = 0; i < rung.coefficients; ++i) {
          const auto [r, col] = order[static_cast<std::size_t>(i)];
          kept(r, col) = i == 0 ? quantize_dc(coeffs(r, col), rung.bits) : quantize_ac(coeffs(r, col), rung.bits);
        }
        const Block decoded = c.transpose() * kept * c;
        for (int y = 0; y < kBlock; ++y) {
          for (int x = 0; x < kBlock; ++x) out.at(by + y, bx + x, ch) = decoded(y, x);
        }
      }
    }
  }
  return clamp_unit(std::move(out));
}

std::vector<RdPoint> ToyDctCodec::rd_curve(const Image& image) const {
  std::vector<RdPoint> points;
  points.reserve(ladder_.size());
  for (const auto& rung : ladder_) points.push_back({rung.bpp(), harness::psnr(image, reconstruct(image, rung))});
  return upper_envelope(std::move(points));
}

std::string expand_command(const std::string& templ, const std::string& input, const std::string& output,
                           const std::string& quality) {
  std::string out;
  for (std::size_t i = 0; i < templ.size();) {
    if (templ.compare(i, 7, "{input}") == 0) {
      out += shell_quote(input);
      i += 7;
    } else if (templ.compare(i, 8, "{output}") == 0) {
      out += shell_quote(output);
      i += 8;
    } else if (templ.compare(i, 9, "{quality}") == 0) {
      out += shell_quote(quality);
      i += 9;
    } else {
      out += templ[i++];
    }
  }
  return out;
}

ExternalCodec::ExternalCodec(ExternalCodecConfig config) : config_(std::move(config)) {
  if (config_.encode_command.empty() || config_.decode_command.empty()) {
    throw ConfigError("external codec needs both encode and decode commands");
  }
  if (config_.qualities.empty()) throw ConfigError("external codec needs at least one quality setting");
  if (config_.work_dir.empty()) config_.work_dir = std::filesystem::temp_directory_path();
}

std::vector<RdPoint> ExternalCodec::rd_curve(const Image& image) const {
  namespace fs = std::filesystem;
  const auto stem = fmt::format("mimojscc_codec_{}_{}", static_cast<const void*>(this), static_cast<const void*>(&image));
  const fs::path source = config_.work_dir / (stem + "_src.ppm");
  const fs::path packed = config_.work_dir / (stem + "_bits");
  const fs::path decoded = config_.work_dir / (stem + "_dec.ppm");
  harness::write_ppm(source, image);
  // The source is quantized to 8 bits on disk; PSNR is measured against that copy.
  const Image reference = harness::read_ppm(source);

  std::vector<RdPoint> points;
  for (const auto& quality : config_.qualities) {
    for (const auto& [templ, in, out] : {std::tuple{config_.encode_command, source, packed},
                                         std::tuple{config_.decode_command, packed, decoded}}) {
      const std::string cmd = expand_command(templ, in.string(), out.string(), quality);
      if (std::system(cmd.c_str()) != 0) throw NumericError(fmt::format("external codec command failed: {}", cmd));
    }
    const auto bytes = fs::file_size(packed);
    const Image recon = harness::fit_image(harness::read_ppm(decoded), image.height, image.width);
    points.push_back({8.0 * static_cast<double>(bytes) / static_cast<double>(image.height * image.width),
                      harness::psnr(reference, recon)});
  }
  for (const auto& p : {source, packed, decoded}) fs::remove(p);
  return upper_envelope(std::move(points));
}

std::string CombinedCodec::name() const {
  std::string out;
  for (const auto* p : parts_) out += (out.empty() ? "" : "+") + p->name();
  return out;
}

std::vector<RdPoint> CombinedCodec::rd_curve(const Image& image) const {
  std::vector<RdPoint> all;
  for (const auto* p : parts_) {
    const auto curve = p->rd_curve(image);
    all.insert(all.end(), curve.begin(), curve.end());
  }
  return upper_envelope(std::move(all));
}

}  // namespace mimojscc::baseline
