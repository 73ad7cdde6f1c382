/*
 * Copyright 2026 The RFOL Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#ifndef RFOL_SOLVER_HPP_
#define RFOL_SOLVER_HPP_

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <memory>
#include <mutex>
#include <optional>
#include <utility>

#include "rfol/features.hpp"
#include "rfol/types.hpp"

namespace rfol {

// Jitter escalation ladder, relative to the Gram scale (N for feature Grams,
// 1 for kernel matrices with unit diagonal). The first rung that factorizes
// wins; the matrix is treated as numerically indefinite past the last rung.
inline constexpr double kJitterLadder[] = {0.0, 1e-14, 1e-12, 1e-10, 1e-8};

// Interpolation accuracy contract: |A c - y|_inf <= tol * max(1, |y|_inf)
// whenever the system is solvable at working precision.
inline constexpr double kResidualTol = 1e-8;

// An exact-interpolation solution whose Frobenius norm exceeds this multiple
// of the right-hand side norm marks the constraints as numerically
// inconsistent; the regularized Gram solution is used instead. Consistent
// but ill-conditioned systems sit orders of magnitude below this (ratios up
// to ~1e6), truly inconsistent ones orders of magnitude above (~1e8+).
inline constexpr double kCoefNormGuard = 1e7;

/// Cholesky with jitter escalation for self-adjoint positive (semi)definite
/// matrices. Returns the factorization and the absolute jitter added to the
/// diagonal. Works for real and complex matrices.
template <class MatType>
std::pair<Eigen::LLT<MatType>, double> cholesky_with_jitter(
    const MatType& gram, double scale) {
  for (double rung : kJitterLadder) {
    const double jitter = rung * scale;
    MatType shifted = gram;
    if (jitter > 0.0) shifted.diagonal().array() += jitter;
    Eigen::LLT<MatType> llt(shifted);
    if (llt.info() == Eigen::Success) return {std::move(llt), jitter};
  }
  Eigen::SelfAdjointEigenSolver<MatType> eig(gram, Eigen::EigenvaluesOnly);
  std::ostringstream msg;
  msg << "cholesky_with_jitter: factorization failed at maximum jitter "
      << kJitterLadder[4] * scale << "; smallest eigenvalue estimate "
      << eig.eigenvalues().minCoeff();
  throw NumericError(msg.str());
}

/// Cholesky factor of A A* (+ jitter, when escalation was needed), reusable
/// for any number of right-hand sides.
struct GramFactorization {
  Eigen::LLT<CMat> llt;
  double jitter = 0.0;      // absolute diagonal shift that succeeded
  Index feature_count = 0;  // N, the natural Gram scale

  Index size() const { return llt.matrixLLT().rows(); }
  CMat factor() const { return llt.matrixL(); }
};

/// A A* computed block-row-wise from the real and imaginary parts (four real
/// GEMMs per block). The fixed block partition keeps the result independent
/// of the worker count.
CMat gram_matrix(const FeatureMatrix& A);

/// Requires the overparametrized regime rows <= cols.
GramFactorization gram_factorize(const FeatureMatrix& A);

/// Factor-once solve-many min-norm interpolation system.
///
/// The primary route is the Gram factorization (m x m, cheap for m << N).
/// The Gram squares the conditioning of A, so when it cannot meet the
/// residual contract the system falls back to a Householder QR of A*
/// (min-norm solution c = Q (R^-* y)), which works at cond(A) instead of
/// cond(A)^2. A QR solution with an exploding coefficient norm marks the
/// constraints as numerically inconsistent, in which case the jittered Gram
/// solution (the ridge-limit compromise) is kept. Solves are const and safe
/// to run concurrently; lazy factorizations are built under once-flags.
class MinNormSystem {
 public:
  explicit MinNormSystem(FeatureMatrix A);

  const FeatureMatrix& feature_matrix() const { return A_; }

  /// Coefficient matrix, one column per right-hand side column.
  CMat solve(const Eigen::Ref<const Mat>& Y) const;
  CVec solve_one(const Eigen::Ref<const Vec>& y) const;

 private:
  const GramFactorization& ensure_gram() const;
  const Eigen::HouseholderQR<CMat>& ensure_qr() const;
  CMat solve_gram(const GramFactorization& gram,
                  const Eigen::Ref<const Mat>& Y) const;
  CMat solve_qr(const Eigen::HouseholderQR<CMat>& qr,
                const Eigen::Ref<const Mat>& Y) const;

  FeatureMatrix A_;
  bool prefer_qr_ = false;
  mutable std::optional<GramFactorization> gram_;
  mutable std::unique_ptr<Eigen::HouseholderQR<CMat>> qr_;
  mutable std::once_flag gram_once_;
  mutable std::once_flag qr_once_;
};

/// Min-norm interpolation c = A* (A A*)^{-1} y.
CVec min_norm_fit(const FeatureMatrix& A, const Eigen::Ref<const Vec>& y);

/// Column-wise min-norm interpolation sharing one factorization.
CMat min_norm_fit_multi(const FeatureMatrix& A, const Eigen::Ref<const Mat>& Y);

/// Extreme eigenvalues (min, max) of (1/N) A A*.
std::pair<double, double> gram_spectrum_bounds(const FeatureMatrix& A);

}  // namespace rfol

#endif  // RFOL_SOLVER_HPP_
