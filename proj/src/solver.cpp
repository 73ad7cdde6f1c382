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

#include "rfol/solver.hpp"

#include "rfol/parallel.hpp"

namespace rfol {

CMat gram_matrix(const FeatureMatrix& A) {
  const Index m = A.rows();
  // Split into real GEMMs: A A* = (C C^T + S S^T) + i (S C^T - C S^T).
  const Mat C = A.real();
  const Mat S = A.imag();
  CMat G(m, m);
  parallel_for(m, 64, [&](Index r0, Index r1) {
    const Index rows = r1 - r0;
    const auto Cb = C.middleRows(r0, rows);
    const auto Sb = S.middleRows(r0, rows);
    G.middleRows(r0, rows).real() = Cb * C.transpose() + Sb * S.transpose();
    G.middleRows(r0, rows).imag() = Sb * C.transpose() - Cb * S.transpose();
  });
  return G;
}

GramFactorization gram_factorize(const FeatureMatrix& A) {
  const Index m = A.rows();
  const Index N = A.cols();
  if (m > N)
    throw ParamError(
        "gram_factorize: needs the overparametrized regime, got " +
        std::to_string(m) + " rows > " + std::to_string(N) + " features");
  const CMat G = gram_matrix(A);
  auto [llt, jitter] = cholesky_with_jitter(G, static_cast<double>(N));
  return GramFactorization{std::move(llt), jitter, N};
}

namespace {

// Mean feature-row coherence |<a_i, a_j>| / N over a fixed deterministic
// pair sample. Near 1 the Gram is a near-ones matrix whose Cholesky cannot
// meet the residual contract, so the Gram attempt is wasted work.
bool gram_predictably_degenerate(const FeatureMatrix& A) {
  const Index m = A.rows();
  if (m < 2) return false;
  const Index pairs = std::min<Index>(64, m - 1);
  double coherence = 0.0;
  for (Index t = 0; t < pairs; ++t) {
    coherence += std::abs(A.row(t).dot(A.row(t + 1).conjugate())) /
                 static_cast<double>(A.cols());
  }
  return coherence / static_cast<double>(pairs) > 0.98;
}

bool residual_within_contract(const FeatureMatrix& A, const CMat& coeffs,
                              const Eigen::Ref<const Mat>& Y) {
  const CMat residual = A * coeffs - Y.cast<Complex>();
  for (Index j = 0; j < Y.cols(); ++j) {
    const double tol =
        kResidualTol * std::max(1.0, Y.col(j).cwiseAbs().maxCoeff());
    if (residual.col(j).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

bool coefficients_sane(const CMat& coeffs, const Eigen::Ref<const Mat>& Y) {
  return coeffs.norm() <= kCoefNormGuard * std::max(1.0, Y.norm());
}

}  // namespace

MinNormSystem::MinNormSystem(FeatureMatrix A) : A_(std::move(A)) {
  if (A_.rows() > A_.cols())
    throw ParamError(
        "min_norm solve: needs the overparametrized regime, got " +
        std::to_string(A_.rows()) + " rows > " + std::to_string(A_.cols()) +
        " features");
  prefer_qr_ = gram_predictably_degenerate(A_);
}

const GramFactorization& MinNormSystem::ensure_gram() const {
  std::call_once(gram_once_, [&] { gram_.emplace(gram_factorize(A_)); });
  return *gram_;
}

const Eigen::HouseholderQR<CMat>& MinNormSystem::ensure_qr() const {
  std::call_once(qr_once_,
                 [&] { qr_ = std::make_unique<Eigen::HouseholderQR<CMat>>(
                           A_.adjoint()); });
  return *qr_;
}

CMat MinNormSystem::solve_gram(const GramFactorization& gram,
                               const Eigen::Ref<const Mat>& Y) const {
  const Index cols = Y.cols();
  CMat W(A_.rows(), cols);
  parallel_for(cols, 8, [&](Index c0, Index c1) {
    W.middleCols(c0, c1 - c0) =
        gram.llt.solve(Y.middleCols(c0, c1 - c0).cast<Complex>());
  });
  CMat coeffs(A_.cols(), cols);
  parallel_for(cols, 8, [&](Index c0, Index c1) {
    coeffs.middleCols(c0, c1 - c0) = A_.adjoint() * W.middleCols(c0, c1 - c0);
  });
  return coeffs;
}

CMat MinNormSystem::solve_qr(const Eigen::HouseholderQR<CMat>& qr,
                             const Eigen::Ref<const Mat>& Y) const {
  const Index m = A_.rows();
  const Index N = A_.cols();
  // A* = Q R; the min-norm interpolant is c = Q [R^-* y; 0].
  CMat Z = CMat::Zero(N, Y.cols());
  Z.topRows(m) = qr.matrixQR()
                     .topRows(m)
                     .triangularView<Eigen::Upper>()
                     .adjoint()
                     .solve(Y.cast<Complex>());
  return qr.householderQ() * Z;
}

// Route policy. The Gram path is the cheap one and wins whenever it meets
// the residual contract. When it cannot (cond(A)^2 beyond double precision),
// the QR of A* restores exact interpolation at cond(A). A QR solution whose
// coefficient norm explodes signals constraints that are inconsistent at
// working precision (e.g. duplicated inputs with conflicting targets); the
// jittered Gram solution is the ridge-limit compromise and is kept instead.
CMat MinNormSystem::solve(const Eigen::Ref<const Mat>& Y) const {
  if (Y.rows() != A_.rows())
    throw ParamError("min_norm solve: " + std::to_string(Y.rows()) +
                     " right-hand side rows for " + std::to_string(A_.rows()) +
                     " interpolation constraints");
  if (!prefer_qr_) {
    const GramFactorization& gram = ensure_gram();
    CMat coeffs = solve_gram(gram, Y);
    if (gram.jitter == 0.0 && residual_within_contract(A_, coeffs, Y))
      return coeffs;
    CMat exact = solve_qr(ensure_qr(), Y);
    return coefficients_sane(exact, Y) ? exact : coeffs;
  }
  CMat exact = solve_qr(ensure_qr(), Y);
  if (coefficients_sane(exact, Y)) return exact;
  return solve_gram(ensure_gram(), Y);
}

CVec MinNormSystem::solve_one(const Eigen::Ref<const Vec>& y) const {
  return solve(y).col(0);
}

CVec min_norm_fit(const FeatureMatrix& A, const Eigen::Ref<const Vec>& y) {
  return MinNormSystem(A).solve_one(y);
}

CMat min_norm_fit_multi(const FeatureMatrix& A,
                        const Eigen::Ref<const Mat>& Y) {
  return MinNormSystem(A).solve(Y);
}

std::pair<double, double> gram_spectrum_bounds(const FeatureMatrix& A) {
  const double N = static_cast<double>(A.cols());
  const CMat G = gram_matrix(A) / N;
  Eigen::SelfAdjointEigenSolver<CMat> eig(G, Eigen::EigenvaluesOnly);
  const Vec& ev = eig.eigenvalues();
  return {ev.minCoeff(), ev.maxCoeff()};
}

}  // namespace rfol
