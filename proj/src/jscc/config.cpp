// SPDX-License-Identifier: Apache-2.0
#include "mimojscc/jscc/config.hpp"

#include <fmt/format.h>

#include <cmath>

namespace mimojscc::jscc {

std::string_view to_string(Equalizer eq) {
  switch (eq) {
    case Equalizer::DlZf: return "dl_zf";
    case Equalizer::Zf: return "zf";
    case Equalizer::Mmse: return "mmse";
  }
  return "?";
}

Equalizer parse_equalizer(std::string_view text) {
  if (text == "dl_zf") return Equalizer::DlZf;
  if (text == "zf") return Equalizer::Zf;
  if (text == "mmse") return Equalizer::Mmse;
  throw ConfigError(fmt::format("unknown equalizer '{}' (expected dl_zf, zf or mmse)", text));
}

void ModelConfig::validate() const {
  if (m_max < 1 || m_max > kMaxSvdDim) throw ConfigError(fmt::format("antenna count {} outside 1..8", m_max));
  if (adaptive_m && m_max < 2) throw ConfigError("adaptive antenna training needs m_max >= 2");
  if (uses < 1) throw ConfigError("channel uses must be positive");
  if (grid < 1 || height % grid != 0 || width % grid != 0) {
    throw ConfigError(fmt::format("patch grid {} does not divide image {}x{}", grid, height, width));
  }
  if ((2 * m_max * uses) % tokens() != 0) {
    throw ConfigError(fmt::format("sequence length {} does not divide 2*M*k = {}", tokens(), 2 * m_max * uses));
  }
  if (dim < 1 || heads < 1 || dim % heads != 0) {
    throw ConfigError(fmt::format("embedding dim {} not divisible by {} heads", dim, heads));
  }
  if (depth < 0 || mlp_hidden < 1 || residual_hidden < 1) throw ConfigError("layer sizes must be positive");
  if (snr_train.hi < snr_train.lo) throw ConfigError("training SNR range is reversed");
  if (mode == CsiMode::Csit && equalizer != Equalizer::DlZf) {
    throw ConfigError("closed-loop mode uses SVD equalization; equalizer option applies to csir only");
  }
  if (!(sentinel > 0.0) || !std::isfinite(sentinel)) throw ConfigError("sentinel must be positive and finite");
}

ModelConfig ModelConfig::tiny() { return ModelConfig{}; }

ModelConfig ModelConfig::full() {
  ModelConfig c;
  c.height = 32;
  c.width = 32;
  c.grid = 8;
  c.dim = 256;
  c.heads = 8;
  c.depth = 8;
  c.mlp_hidden = 512;
  c.uses = uses_for_ratio(1.0 / 12.0, 32, 32);
  return c;
}

ModelConfig ModelConfig::profile(std::string_view name) {
  if (name == "tiny") return tiny();
  if (name == "full") return full();
  throw ConfigError(fmt::format("unknown model profile '{}' (expected tiny or full)", name));
}

Eigen::Index uses_for_ratio(double ratio, Eigen::Index height, Eigen::Index width) {
  const double k = ratio * 3.0 * static_cast<double>(height * width);
  const double rounded = std::round(k);
  if (!(ratio > 0.0) || std::abs(k - rounded) > 1e-6 * std::max(1.0, k) || rounded < 1.0) {
    throw ConfigError(fmt::format("bandwidth ratio {} gives non-integral k = {} for {}x{} images", ratio, k, height,
                                  width));
  }
  return static_cast<Eigen::Index>(rounded);
}

}  // namespace mimojscc::jscc
