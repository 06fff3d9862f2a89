// SPDX-License-Identifier: Apache-2.0
#include "mimojscc/frontend.hpp"

#include <fmt/format.h>

#include <cmath>

#include "mimojscc/symbol_layout.hpp"

namespace mimojscc::frontend {

std::string_view to_string(CsiMode mode) { return mode == CsiMode::Csir ? "csir" : "csit"; }

CsiMode parse_csi_mode(std::string_view text) {
  if (text == "csir" || text == "CSIR") return CsiMode::Csir;
  if (text == "csit" || text == "CSIT") return CsiMode::Csit;
  throw ConfigError(fmt::format("unknown CSI mode '{}' (expected csir or csit)", text));
}

ComplexMatrix zf_matrix(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) throw DimensionError("zf_matrix: channel must be square");
  const auto f = complex_svd(h);
  const double cond = condition_number(f.s);
  if (!(cond < kZfConditionLimit)) {
    throw IllConditionedError(fmt::format("zf_matrix: channel condition number {:.3e} too large", cond), cond);
  }
  const RealVector inv = f.s.cwiseInverse();
  return f.v * inv.cast<std::complex<double>>().asDiagonal() * f.u.adjoint();
}

ComplexMatrix mmse_matrix(const ComplexMatrix& h, double sigma_w2) {
  if (h.rows() != h.cols()) throw DimensionError("mmse_matrix: channel must be square");
  if (!(sigma_w2 >= 0.0)) throw ArgumentError("mmse_matrix: negative noise variance");
  const ComplexMatrix gram =
      h * h.adjoint() + std::complex<double>(sigma_w2) * ComplexMatrix::Identity(h.rows(), h.rows());
  // gram is Hermitian, so H^H gram^-1 = (gram^-1 H)^H.
  const ComplexMatrix solved = gram.partialPivLu().solve(h);
  return solved.adjoint();
}

ComplexMatrix svd_precode(const ComplexMatrix& x, const ComplexMatrix& v) {
  if (v.rows() != v.cols() || v.cols() != x.rows()) throw DimensionError("svd_precode: V and X do not conform");
  return v * x;
}

ComplexMatrix svd_equalizer_matrix(const SvdFactors<double>& factors, double tol) {
  const RealVector inv = pseudo_inverse_diag(factors.s, tol);
  return inv.cast<std::complex<double>>().asDiagonal() * factors.u.adjoint();
}

ComplexMatrix svd_equalize(const ComplexMatrix& y, const SvdFactors<double>& factors, double tol) {
  if (y.rows() != factors.u.rows()) throw DimensionError("svd_equalize: Y and U do not conform");
  return svd_equalizer_matrix(factors, tol) * y;
}

RealVector noise_power_linear(const ComplexMatrix& g, double sigma_w2) {
  return sigma_w2 * g.rowwise().squaredNorm();
}

RealVector noise_power_csir(const ComplexMatrix& h_est, double sigma_w2) {
  return noise_power_linear(zf_matrix(h_est), sigma_w2);
}

RealVector noise_power_csit(const RealVector& s, double sigma_w2, double tol, double sentinel) {
  const RealVector inv = pseudo_inverse_diag(s, tol);
  RealVector out(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    out(i) = inv(i) > 0.0 ? sigma_w2 * inv(i) * inv(i) : sentinel;
  }
  return out;
}

Heatmap build_heatmap(const RealVector& noise_power, Eigen::Index tokens, Eigen::Index uses) {
  const Eigen::Index antennas = noise_power.size();
  token_width(antennas, uses, tokens);
  RowMatrix grid(antennas, 2 * uses);
  for (Eigen::Index i = 0; i < antennas; ++i) grid.row(i).setConstant(0.5 * noise_power(i));
  return Heatmap{grid_to_tokens(grid, tokens)};
}

PowerAllocation water_filling(const RealVector& s, double sigma_w2, double p_total) {
  if (!(p_total > 0.0)) throw ArgumentError("water_filling: power budget must be positive");
  if (!(sigma_w2 >= 0.0)) throw ArgumentError("water_filling: negative noise variance");
  const Eigen::Index n = s.size();
  RealVector floor_level = RealVector::Constant(n, std::numeric_limits<double>::infinity());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (s(i) < 0.0) throw ArgumentError("water_filling: negative singular value");
    if (s(i) > 0.0) {
      floor_level(i) = sigma_w2 / (s(i) * s(i));
      lo = std::min(lo, floor_level(i));
      hi = std::max(hi, floor_level(i));
    }
  }
  if (!std::isfinite(lo)) throw ArgumentError("water_filling: every subchannel has zero gain");

  auto poured = [&](double level) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) total += std::max(0.0, level - floor_level(i));
    return total;
  };

  hi += p_total;
  double level = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    level = 0.5 * (lo + hi);
    const double excess = poured(level) - p_total;
    if (std::abs(excess) < 1e-12) break;
    (excess > 0.0 ? hi : lo) = level;
  }

  // Close the budget exactly on the active set found by bisection.
  double active_sum = 0.0;
  int active = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (level > floor_level(i)) {
      active_sum += floor_level(i);
      ++active;
    }
  }
  if (active > 0) level = (p_total + active_sum) / active;

  PowerAllocation out{RealVector::Zero(n), level};
  for (Eigen::Index i = 0; i < n; ++i) out.p(i) = std::max(0.0, level - floor_level(i));
  return out;
}

double capacity_open_loop_from_singular_values(const RealVector& s, double sigma_w2) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double gain = s(i) * s(i);
    if (gain > 0.0) total += std::log2(1.0 + gain / sigma_w2);
  }
  return total;
}

double capacity_open_loop(const ComplexMatrix& h, double sigma_w2) {
  if (h.rows() != h.cols()) throw DimensionError("capacity_open_loop: channel must be square");
  return capacity_open_loop_from_singular_values(complex_svd(h).s, sigma_w2);
}

double capacity_closed_loop(const RealVector& s, double sigma_w2, double p_total) {
  const PowerAllocation alloc = water_filling(s, sigma_w2, p_total);
  double total = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double gain = alloc.p(i) * s(i) * s(i);
    if (gain > 0.0) total += std::log2(1.0 + gain / sigma_w2);
  }
  return total;
}

double capacity_closed_loop(const RealVector& s, double sigma_w2) {
  return capacity_closed_loop(s, sigma_w2, static_cast<double>(s.size()));
}

}  // namespace mimojscc::frontend
