// SPDX-License-Identifier: Apache-2.0
#include "mimojscc/jscc/pipeline.hpp"

#include <fmt/format.h>

#include <cmath>

#include "mimojscc/frontend.hpp"
#include "mimojscc/nn/ops.hpp"
#include "mimojscc/symbol_layout.hpp"

namespace mimojscc::jscc {
namespace {

using nn::Matrix;
using nn::Tensor;

// M x 2k [Re | Im] grid -> 2M x k [Re; Im] stacked.
Tensor grid_to_stacked(const Tensor& grid) {
  const auto k = grid.cols() / 2;
  return nn::concat_rows(std::vector<Tensor>{nn::slice_cols(grid, 0, k), nn::slice_cols(grid, k, k)});
}

Tensor stacked_to_grid(const Tensor& stacked) {
  const auto m = stacked.rows() / 2;
  return nn::concat_cols(std::vector<Tensor>{nn::slice_rows(stacked, 0, m), nn::slice_rows(stacked, m, m)});
}

Tensor pad_grid_rows(const Tensor& grid, Eigen::Index rows) {
  if (grid.rows() == rows) return grid;
  const Tensor zeros = Tensor::constant(Matrix::Zero(rows - grid.rows(), grid.cols()));
  return nn::concat_rows(std::vector<Tensor>{grid, zeros});
}

ComplexMatrix pad_square(const ComplexMatrix& a, Eigen::Index size) {
  ComplexMatrix out = ComplexMatrix::Zero(size, size);
  out.topLeftCorner(a.rows(), a.cols()) = a;
  return out;
}

RealVector pad_sentinel(const RealVector& v, Eigen::Index size, double sentinel) {
  RealVector out = RealVector::Constant(size, sentinel);
  out.head(v.size()) = v;
  return out;
}

ComplexMatrix open_loop_equalizer(const ModelConfig& c, const channel::ChannelRealization& ch) {
  if (c.equalizer == Equalizer::Mmse) return frontend::mmse_matrix(ch.h_est, ch.sigma_w2);
  return frontend::zf_matrix(ch.h_est);
}

const ComplexMatrix& closed_loop_channel(const ModelConfig& c, const channel::ChannelRealization& ch) {
  return c.csit_uses_estimate ? ch.h_est : ch.h;
}

}  // namespace

channel::SymbolBlock pack_symbols(const Eigen::Ref<const RowMatrix>& z, Eigen::Index antennas, Eigen::Index uses) {
  if (z.size() != 2 * antennas * uses) {
    throw DimensionError(fmt::format("pack_symbols: {} entries for a {}x{} block", z.size(), antennas, uses));
  }
  token_width(antennas, uses, z.rows());
  return grid_to_complex(tokens_to_grid(z, antennas));
}

RowMatrix unpack_symbols(const channel::SymbolBlock& x, Eigen::Index tokens) {
  return grid_to_tokens(complex_to_grid(x), tokens);
}

channel::SymbolBlock power_normalize(const Eigen::Ref<const RowMatrix>& z, Eigen::Index antennas, Eigen::Index uses) {
  channel::SymbolBlock x = pack_symbols(z, antennas, uses);
  const double norm = x.norm();
  if (norm == 0.0) return x;
  return x * (std::sqrt(static_cast<double>(antennas * uses)) / norm);
}

void validate_plan(const ChannelPlan& plan, const ModelConfig& config) {
  if (plan.snr.hi < plan.snr.lo) throw ConfigError("SNR range is reversed");
  if (plan.sigma_e2 < 0.0) throw ConfigError("estimation-error variance must be non-negative");
  if (config.mode == CsiMode::Csit && plan.sigma_e2 > 0.0 && !plan.allow_csit_error) {
    throw ConfigError("estimation error is only modeled for csir; set allow_csit_error to override");
  }
}

LinkDraw draw_link(RngStream& rng, const ChannelPlan& plan, Eigen::Index antennas, Eigen::Index uses) {
  LinkDraw out;
  out.snr_db = plan.snr.lo + (plan.snr.hi - plan.snr.lo) * rng.uniform();
  const double sigma_w2 = plan.noiseless ? 0.0 : channel::snr_to_noise_variance(out.snr_db, antennas);
  out.ch = channel::sample_channel(rng, antennas, sigma_w2, plan.sigma_e2);
  if (plan.identity_channel) {
    const ComplexMatrix error = out.ch.h_est - out.ch.h;
    out.ch.h = ComplexMatrix::Identity(antennas, antennas);
    out.ch.h_est = plan.sigma_e2 > 0.0 ? ComplexMatrix(out.ch.h + error) : out.ch.h;
  }
  out.noise = channel::sample_noise(rng, antennas, uses, sigma_w2);
  return out;
}

void PowerMonitor::record(double power) {
  ++checks;
  const double dev = std::abs(power - 1.0);
  max_deviation = std::max(max_deviation, dev);
  if (!(dev <= kPowerTolerance)) ++violations;
}

void PowerMonitor::merge(const PowerMonitor& other) {
  checks += other.checks;
  violations += other.violations;
  max_deviation = std::max(max_deviation, other.max_deviation);
}

LinkOutput transmit_image(const Model& model, const RowMatrix& patches, const LinkDraw& link, LinkPath path,
                          PowerMonitor* monitor) {
  const ModelConfig& c = model.config();
  const auto m = link.ch.antennas();
  const auto m_max = c.m_max;
  const auto k = c.uses;
  const auto l = c.tokens();
  if (m < 1 || m > m_max) throw ConfigError(fmt::format("{} active antennas outside 1..{}", m, m_max));
  if (path == LinkPath::Fixed && m != m_max) throw ConfigError("fixed path transmits on all m_max antennas");
  if (link.noise.rows() != m || link.noise.cols() != k) throw DimensionError("transmit_image: noise block shape");

  // Receiver-side quantities; the closed-loop encoder also sees the heatmap.
  std::optional<SvdFactors<double>> factors;
  ComplexMatrix equalizer;
  RealVector noise_power;
  if (c.mode == CsiMode::Csit) {
    factors = complex_svd(closed_loop_channel(c, link.ch));
    equalizer = frontend::svd_equalizer_matrix(*factors);
    noise_power = frontend::noise_power_csit(factors->s, link.ch.sigma_w2, frontend::kPinvTolerance, c.sentinel);
  } else {
    equalizer = open_loop_equalizer(c, link.ch);
    noise_power = frontend::noise_power_linear(equalizer, link.ch.sigma_w2);
  }
  const Tensor heatmap =
      Tensor::constant(frontend::build_heatmap(pad_sentinel(noise_power, m_max, c.sentinel), l, k).values);

  const Tensor source = Tensor::constant(patches);
  const Tensor z = model.encode(source, c.mode == CsiMode::Csit ? &heatmap : nullptr);
  Tensor grid = nn::reshape(z, m_max, 2 * k);
  if (path == LinkPath::Padded) grid = nn::slice_rows(grid, 0, m);
  grid = nn::frobenius_normalize(grid, std::sqrt(static_cast<double>(m * k)));
  const double tx_power = grid.value().squaredNorm() / static_cast<double>(m * k);
  if (monitor != nullptr) monitor->record(tx_power);

  Tensor x = grid_to_stacked(grid);
  if (factors) x = nn::lmul(realify(factors->v), x);
  Tensor y = nn::add_constant(nn::lmul(realify(link.ch.h), x), stack_real_imag(link.noise));
  Tensor eq = nn::lmul(realify(equalizer), y);

  Tensor eq_grid = stacked_to_grid(eq);
  if (path == LinkPath::Padded) eq_grid = pad_grid_rows(eq_grid, m_max);
  if (c.uses_residual()) {
    Tensor y_full = y;
    if (path == LinkPath::Padded && m != m_max) y_full = grid_to_stacked(pad_grid_rows(stacked_to_grid(y), m_max));
    const ComplexMatrix h_full = path == LinkPath::Padded ? pad_square(link.ch.h_est, m_max) : link.ch.h_est;
    eq_grid = nn::add(eq_grid, stacked_to_grid(model.residual(y_full, h_full)));
  }

  const Tensor symbols = nn::reshape(eq_grid, l, c.token_width());
  LinkOutput out;
  out.reconstruction = model.decode(symbols, heatmap);
  out.loss = nn::mse_loss(out.reconstruction, patches);
  out.tx_power = tx_power;
  return out;
}

}  // namespace mimojscc::jscc
