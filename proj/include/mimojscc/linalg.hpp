// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <vector>

#include "mimojscc/errors.hpp"
#include "mimojscc/rng.hpp"

namespace mimojscc {

template <typename Real>
using ComplexMatrixT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using RealVectorT = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using ComplexMatrix = ComplexMatrixT<double>;
using RealVector = RealVectorT<double>;
using RealMatrix = Eigen::MatrixXd;
/// Row-major real matrix; row-major reshapes are plain relabelings of storage.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Largest antenna count accepted on the SVD path.
inline constexpr Eigen::Index kMaxSvdDim = 8;

template <typename Real>
struct SvdFactors {
  ComplexMatrixT<Real> u;
  RealVectorT<Real> s;  // descending
  ComplexMatrixT<Real> v;

  ComplexMatrixT<Real> reconstruct() const {
    return u * s.template cast<std::complex<Real>>().asDiagonal() * v.adjoint();
  }
};

/// Sum of squared magnitudes of all entries.
template <typename Derived>
auto frobenius_norm_sq(const Eigen::MatrixBase<Derived>& a) {
  return a.squaredNorm();
}

/// Reciprocal of every entry above `tol * max(s)`, zero otherwise.
template <typename Derived>
RealVectorT<typename Derived::Scalar> pseudo_inverse_diag(const Eigen::MatrixBase<Derived>& s,
                                                          typename Derived::Scalar tol) {
  using Real = typename Derived::Scalar;
  RealVectorT<Real> out = RealVectorT<Real>::Zero(s.size());
  if (s.size() == 0) return out;
  const Real largest = s.maxCoeff();
  if (!(largest > Real(0))) return out;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol * largest) out(i) = Real(1) / s(i);
  }
  return out;
}

/// Ratio of largest to smallest singular value; +inf when singular.
template <typename Derived>
auto condition_number(const Eigen::MatrixBase<Derived>& s) {
  using Real = typename Derived::Scalar;
  const Real smallest = s.minCoeff();
  if (!(smallest > Real(0))) return std::numeric_limits<Real>::infinity();
  return s.maxCoeff() / smallest;
}

namespace detail {

// Columns of `u` flagged in `missing` are filled with an orthonormal
// completion of the remaining columns, drawn from the standard basis.
template <typename Real>
void complete_unitary(ComplexMatrixT<Real>& u, const std::vector<bool>& missing) {
  using Complex = std::complex<Real>;
  const Eigen::Index n = u.rows();
  std::vector<bool> filled(missing.size());
  for (std::size_t i = 0; i < missing.size(); ++i) filled[i] = !missing[i];
  Eigen::Index candidate = 0;
  for (Eigen::Index col = 0; col < n; ++col) {
    if (filled[col]) continue;
    while (candidate < n) {
      Eigen::Matrix<Complex, Eigen::Dynamic, 1> e = Eigen::Matrix<Complex, Eigen::Dynamic, 1>::Zero(n);
      e(candidate++) = Complex(1);
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index j = 0; j < n; ++j) {
          if (filled[j]) e -= u.col(j) * u.col(j).dot(e);
        }
      }
      const Real norm = e.norm();
      if (norm > Real(0.5)) {
        u.col(col) = e / norm;
        filled[col] = true;
        break;
      }
    }
    if (!filled[col]) throw NumericError("complex_svd: failed to complete unitary basis");
  }
}

}  // namespace detail

/// Singular value decomposition a = u * diag(s) * v^H of a small square
/// complex matrix by one-sided (Hestenes) Jacobi rotations.
///
/// Singular values come out sorted descending. Each column of u is rotated so
/// that its largest-magnitude entry is real and non-negative, with v rotated
/// alike, which makes the factorization deterministic.
template <typename Real>
SvdFactors<Real> complex_svd(const ComplexMatrixT<Real>& a) {
  using Complex = std::complex<Real>;
  if (a.rows() != a.cols()) throw DimensionError("complex_svd: matrix must be square");
  if (a.rows() > kMaxSvdDim) throw DimensionError("complex_svd: matrix larger than 8x8");
  if (!a.allFinite()) throw ArgumentError("complex_svd: non-finite entry");

  constexpr int kMaxSweeps = 200;
  const Real tolerance = std::max(Real(1e-14), Real(10) * std::numeric_limits<Real>::epsilon());
  const Eigen::Index n = a.rows();

  ComplexMatrixT<Real> w = a;
  ComplexMatrixT<Real> v = ComplexMatrixT<Real>::Identity(n, n);

  bool converged = n <= 1;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    Real off = 0;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Real alpha = w.col(p).squaredNorm();
        const Real beta = w.col(q).squaredNorm();
        const Complex gamma = w.col(p).dot(w.col(q));
        const Real mag = std::abs(gamma);
        if (mag == Real(0)) continue;
        off = std::max(off, mag / std::sqrt(alpha * beta));

        const Complex phase_conj = std::conj(gamma / mag);
        const Real zeta = (beta - alpha) / (Real(2) * mag);
        const Real t = (zeta >= 0 ? Real(1) : Real(-1)) / (std::abs(zeta) + std::sqrt(Real(1) + zeta * zeta));
        const Real c = Real(1) / std::sqrt(Real(1) + t * t);
        const Real s = c * t;

        for (auto* m : {&w, &v}) {
          auto col_p = m->col(p).eval();
          auto col_q = (m->col(q) * phase_conj).eval();
          m->col(p) = c * col_p - s * col_q;
          m->col(q) = s * col_p + c * col_q;
        }
      }
    }
    converged = off < tolerance;
  }
  if (!converged) throw NumericError("complex_svd: Jacobi sweeps did not converge");

  RealVectorT<Real> sigma(n);
  for (Eigen::Index i = 0; i < n; ++i) sigma(i) = w.col(i).norm();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return sigma(i) > sigma(j); });

  SvdFactors<Real> out{ComplexMatrixT<Real>::Zero(n, n), RealVectorT<Real>(n), ComplexMatrixT<Real>(n, n)};
  const Real largest = n > 0 ? sigma(order.front()) : Real(0);
  const Real negligible = largest * Real(n) * Real(100) * std::numeric_limits<Real>::epsilon();
  std::vector<bool> missing(static_cast<std::size_t>(n), false);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto src = order[static_cast<std::size_t>(i)];
    out.s(i) = sigma(src);
    out.v.col(i) = v.col(src);
    if (sigma(src) > negligible && sigma(src) > Real(0)) {
      out.u.col(i) = w.col(src) / sigma(src);
    } else {
      missing[static_cast<std::size_t>(i)] = true;
    }
  }
  if (std::find(missing.begin(), missing.end(), true) != missing.end()) {
    detail::complete_unitary(out.u, missing);
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index pivot = 0;
    Real best = Real(-1);
    for (Eigen::Index r = 0; r < n; ++r) {
      const Real m = std::abs(out.u(r, i));
      if (m > best) {
        best = m;
        pivot = r;
      }
    }
    if (best > Real(0)) {
      const Complex rot = std::conj(out.u(pivot, i) / best);
      out.u.col(i) *= rot;
      out.v.col(i) *= rot;
      out.u(pivot, i) = Complex(std::abs(out.u(pivot, i)), Real(0));
    }
  }
  return out;
}

/// Matrix with i.i.d. circularly-symmetric complex Gaussian entries of the
/// given per-entry variance. Entries are drawn in row-major order.
ComplexMatrix sample_complex_gaussian(RngStream& rng, Eigen::Index rows, Eigen::Index cols, double variance);

/// Real 2r x 2c block form [[Re, -Im], [Im, Re]] of a complex matrix, acting
/// on vectors stacked as [Re; Im].
RealMatrix realify(const ComplexMatrix& a);

/// Stacks a complex r x c matrix as the real 2r x c matrix [Re; Im].
RealMatrix stack_real_imag(const ComplexMatrix& a);

/// Inverse of stack_real_imag.
ComplexMatrix unstack_real_imag(const Eigen::Ref<const RealMatrix>& stacked);

}  // namespace mimojscc
