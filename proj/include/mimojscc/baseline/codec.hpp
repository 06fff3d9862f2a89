// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mimojscc/image.hpp"

namespace mimojscc::baseline {

struct RdPoint {
  double bpp = 0;
  double psnr_db = 0;
};

/// Rate-distortion provider. Curves have strictly increasing bpp and
/// non-decreasing PSNR.
class Codec {
 public:
  virtual ~Codec() = default;
  virtual std::string name() const = 0;
  virtual std::vector<RdPoint> rd_curve(const Image& image) const = 0;
};

/// Sorts by rate, keeps the best PSNR per rate and takes the running maximum,
/// since any rate can spend its bits on a lower rung.
std::vector<RdPoint> upper_envelope(std::vector<RdPoint> points);

struct DctRung {
  int coefficients = 0;  // m, leading zigzag coefficients kept per 8x8 block
  int bits = 0;          // b, fixed-length bits per kept coefficient
  double bpp() const { return 3.0 * coefficients * bits / 64.0; }
};

/// m in {1, 2, 4, 8, 16, 32, 64} x b in {2, 4, 8}.
std::vector<DctRung> default_ladder();

/// 8x8 orthonormal block DCT per channel with uniform fixed-length quantization.
class ToyDctCodec final : public Codec {
 public:
  explicit ToyDctCodec(std::vector<DctRung> ladder = default_ladder()) : ladder_(std::move(ladder)) {}
  std::string name() const override { return "toy-dct"; }
  std::vector<RdPoint> rd_curve(const Image& image) const override;
  /// Decoded image for one rung.
  Image reconstruct(const Image& image, const DctRung& rung) const;

 private:
  std::vector<DctRung> ladder_;
};

/// Runs user-supplied command lines. Each template may use {input},
/// {output} and {quality}; the encoder writes the compressed file whose size
/// on disk sets the rate, the decoder turns it back into a PPM.
struct ExternalCodecConfig {
  std::string encode_command;  // {input}: source PPM, {output}: compressed file
  std::string decode_command;  // {input}: compressed file, {output}: reconstructed PPM
  std::vector<std::string> qualities;
  std::filesystem::path work_dir;  // defaults to the system temp directory
};

class ExternalCodec final : public Codec {
 public:
  explicit ExternalCodec(ExternalCodecConfig config);
  std::string name() const override { return "external"; }
  std::vector<RdPoint> rd_curve(const Image& image) const override;

 private:
  ExternalCodecConfig config_;
};

/// Replaces {input}, {output} and {quality}; paths are shell-quoted.
std::string expand_command(const std::string& templ, const std::string& input, const std::string& output,
                           const std::string& quality);

/// Codec whose curve is the envelope of several codecs' curves.
class CombinedCodec final : public Codec {
 public:
  explicit CombinedCodec(std::vector<const Codec*> parts) : parts_(std::move(parts)) {}
  std::string name() const override;
  std::vector<RdPoint> rd_curve(const Image& image) const override;

 private:
  std::vector<const Codec*> parts_;
};

}  // namespace mimojscc::baseline
