// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

#include "mimojscc/linalg.hpp"

namespace mimojscc::frontend {

/// Which side knows the channel: receiver only (open loop) or both (closed loop).
enum class CsiMode { Csir, Csit };

std::string_view to_string(CsiMode mode);
CsiMode parse_csi_mode(std::string_view text);

/// Relative tolerance below which a singular value counts as zero.
inline constexpr double kPinvTolerance = 1e-12;
/// Noise power reported for dead subchannels and padded antennas.
inline constexpr double kUnusableSubchannel = 1e3;
/// zf_matrix refuses channels at or above this condition number.
inline constexpr double kZfConditionLimit = 1e12;

/// Per-real-component effective noise power, laid out like the encoder output.
struct Heatmap {
  RowMatrix values;  // l x (2Mk / l)
};

struct PowerAllocation {
  RealVector p;
  double water_level = 0;
};

/// H_w = (H^H H)^-1 H^H. Throws IllConditionedError when cond(H) >= 1e12.
ComplexMatrix zf_matrix(const ComplexMatrix& h);
/// H^H (H H^H + sigma_w2 I)^-1.
ComplexMatrix mmse_matrix(const ComplexMatrix& h, double sigma_w2);

/// V X.
ComplexMatrix svd_precode(const ComplexMatrix& x, const ComplexMatrix& v);
/// Sigma^+ U^H, the closed-loop receive matrix.
ComplexMatrix svd_equalizer_matrix(const SvdFactors<double>& factors, double tol = kPinvTolerance);
/// Sigma^+ U^H Y.
ComplexMatrix svd_equalize(const ComplexMatrix& y, const SvdFactors<double>& factors, double tol = kPinvTolerance);

/// Complex noise variance per output row of a linear receiver G applied to
/// white noise: sigma_w2 * sum_j |G[i, j]|^2.
RealVector noise_power_linear(const ComplexMatrix& g, double sigma_w2);
/// Per-antenna noise power after zero-forcing with the estimated channel.
RealVector noise_power_csir(const ComplexMatrix& h_est, double sigma_w2);
/// Per-subchannel noise power after SVD equalization: sigma_w2 / s_i^2, or
/// `sentinel` for subchannels below tolerance.
RealVector noise_power_csit(const RealVector& s, double sigma_w2, double tol = kPinvTolerance,
                            double sentinel = kUnusableSubchannel);

/// Heatmap with half of each antenna's noise power on both the real and the
/// imaginary cell of every symbol it carries.
Heatmap build_heatmap(const RealVector& noise_power, Eigen::Index tokens, Eigen::Index uses);

/// Capacity-optimal power split over parallel subchannels with gains s_i^2.
PowerAllocation water_filling(const RealVector& s, double sigma_w2, double p_total);

/// sum_i log2(1 + s_i^2 / sigma_w2): equal unit power per antenna, no precoding.
double capacity_open_loop(const ComplexMatrix& h, double sigma_w2);
double capacity_open_loop_from_singular_values(const RealVector& s, double sigma_w2);
/// sum_i log2(1 + p_i s_i^2 / sigma_w2) with water-filled p.
double capacity_closed_loop(const RealVector& s, double sigma_w2, double p_total);
/// Same with the budget p_total = M.
double capacity_closed_loop(const RealVector& s, double sigma_w2);

}  // namespace mimojscc::frontend
