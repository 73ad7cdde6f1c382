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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/SVD>

#include "rfol/features.hpp"
#include "rfol/rng.hpp"
#include "rfol/solver.hpp"

using namespace rfol;

namespace {

// rows j of the N-point DFT matrix: unit modulus, mutually orthogonal,
// A A* = N I exactly
FeatureMatrix dft_rows(Index m, Index N) {
  FeatureMatrix A(m, N);
  const double w = 2.0 * 3.14159265358979323846 / double(N);
  for (Index j = 0; j < m; ++j)
    for (Index k = 0; k < N; ++k) A(j, k) = std::polar(1.0, w * j * k);
  return A;
}

FeatureMatrix random_features(Index m, Index N, std::uint64_t seed,
                              double gamma = 2.0) {
  const FeatureEnsemble ens = sample_cauchy(2, N, gamma, seed);
  SeededRng rng(derive_seed(seed, 1));
  Mat pts(m, 2);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < 2; ++j) pts(i, j) = rng.uniform01();
  return assemble(ens, pts);
}

// dense A A* via an independent triple loop
CMat gram_oracle(const FeatureMatrix& A) {
  CMat G = CMat::Zero(A.rows(), A.rows());
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j < A.rows(); ++j)
      for (Index k = 0; k < A.cols(); ++k)
        G(i, j) += A(i, k) * std::conj(A(j, k));
  return G;
}

}  // namespace

TEST_CASE("gram factor of orthogonal rows is sqrt(N) I with zero jitter") {
  const Index m = 3, N = 8;
  const FeatureMatrix A = dft_rows(m, N);
  const GramFactorization f = gram_factorize(A);
  CHECK(f.jitter == 0.0);
  const CMat L = f.factor();
  CHECK((L - std::sqrt(double(N)) * CMat::Identity(m, m)).cwiseAbs()
            .maxCoeff() < 1e-9);
}

TEST_CASE("single-row gram is exactly [N]") {
  const FeatureMatrix A = random_features(1, 32, 3);
  const GramFactorization f = gram_factorize(A);
  CHECK(f.jitter == 0.0);
  CHECK(std::abs(f.factor()(0, 0) - std::sqrt(32.0)) < 1e-12);
}

TEST_CASE("factor reproduces the dense multiply oracle") {
  const FeatureMatrix A = random_features(4, 16, 9);
  const CMat G = gram_oracle(A);
  const GramFactorization f = gram_factorize(A);
  const CMat L = f.factor();
  CHECK(((L * L.adjoint() - G).norm() / G.norm()) < 1e-10);
  CHECK((gram_matrix(A) - G).norm() / G.norm() < 1e-12);
}

TEST_CASE("gram_factorize requires the overparametrized regime") {
  CHECK_THROWS_AS(gram_factorize(random_features(8, 4, 1)), ParamError);
}

TEST_CASE("cholesky_with_jitter reports indefinite matrices") {
  Mat bad = -Mat::Identity(3, 3);
  try {
    cholesky_with_jitter(bad, 1.0);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("eigenvalue") != std::string::npos);
  }
}

TEST_CASE("min_norm_fit on the identity feature matrix returns y") {
  const Index m = 6;
  FeatureMatrix A = CMat::Identity(m, m);
  Vec y(m);
  y << 1, -2, 3, 0.5, 0, 4;
  const CVec c = min_norm_fit(A, y);
  CHECK((c - y.cast<Complex>()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("min_norm_fit of zero data is zero") {
  const FeatureMatrix A = random_features(4, 20, 15);
  const CVec c = min_norm_fit(A, Vec::Zero(4));
  CHECK(c.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("min_norm_fit matches the SVD pseudo-inverse oracle") {
  const FeatureMatrix A = random_features(3, 8, 21);
  Vec y(3);
  y << 0.3, -1.1, 2.2;
  const CVec c = min_norm_fit(A, y);

  Eigen::JacobiSVD<CMat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const CVec oracle = svd.solve(y.cast<Complex>());
  CHECK((c - oracle).norm() < 1e-8 * std::max(1.0, oracle.norm()));
}

TEST_CASE("multi right-hand sides match repeated single solves") {
  const FeatureMatrix A = random_features(6, 20, 33);
  SeededRng rng(5);
  Mat Y(6, 4);
  for (Index i = 0; i < 6; ++i)
    for (Index j = 0; j < 4; ++j) Y(i, j) = rng.uniform(-2, 2);

  const CMat C = min_norm_fit_multi(A, Y);
  for (Index j = 0; j < 4; ++j) {
    const CVec single = min_norm_fit(A, Y.col(j));
    CHECK((C.col(j) - single).norm() < 1e-10 * std::max(1.0, single.norm()));
  }

  Mat twice(6, 2);
  twice.col(0) = Y.col(1);
  twice.col(1) = Y.col(1);
  const CMat C2 = min_norm_fit_multi(A, twice);
  CHECK((C2.col(0) - C2.col(1)).norm() == 0.0);
}

TEST_CASE("identity targets produce the pseudo-inverse") {
  const Index m = 5;
  const FeatureMatrix A = random_features(m, 25, 41);
  const CMat pinv = min_norm_fit_multi(A, Mat::Identity(m, m));
  CHECK(((A * pinv) - CMat::Identity(m, m)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("spectrum bounds of trivial grams") {
  const FeatureMatrix row = random_features(1, 64, 8);
  auto [lo1, hi1] = gram_spectrum_bounds(row);
  CHECK(lo1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(hi1 == doctest::Approx(1.0).epsilon(1e-12));

  auto [lo2, hi2] = gram_spectrum_bounds(dft_rows(4, 16));
  CHECK(lo2 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(hi2 == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("spectrum bounds match a real-embedding eigensolver oracle") {
  const Index m = 5, N = 40;
  const FeatureMatrix A = random_features(m, N, 27);
  auto [lo, hi] = gram_spectrum_bounds(A);

  // independent route: eigenvalues of the real 2m x 2m embedding of G/N
  const CMat G = gram_oracle(A) / double(N);
  Mat embed(2 * m, 2 * m);
  embed.topLeftCorner(m, m) = G.real();
  embed.topRightCorner(m, m) = -G.imag();
  embed.bottomLeftCorner(m, m) = G.imag();
  embed.bottomRightCorner(m, m) = G.real();
  Eigen::SelfAdjointEigenSolver<Mat> eig(embed, Eigen::EigenvaluesOnly);
  CHECK(lo == doctest::Approx(eig.eigenvalues().minCoeff()).epsilon(1e-8));
  CHECK(hi == doctest::Approx(eig.eigenvalues().maxCoeff()).epsilon(1e-8));
}

TEST_CASE("min-norm optimality, row-space membership, pinv identities") {
  SeededRng seeds(64);
  for (int instance = 0; instance < 12; ++instance) {
    const Index m = 2 + static_cast<Index>(seeds.uniform01() * 14);
    const Index N = m + static_cast<Index>(seeds.uniform01() * 9 * m);
    const FeatureMatrix A = random_features(m, N, derive_seed(900, instance));
    SeededRng rng(derive_seed(901, instance));
    Vec y(m);
    for (Index i = 0; i < m; ++i) y[i] = rng.uniform(-2, 2);

    const MinNormSystem sys(A);
    const CVec c = sys.solve_one(y);

    // interpolation residual
    CHECK((A * c - y.cast<Complex>()).cwiseAbs().maxCoeff() <=
          1e-8 * std::max(1.0, y.cwiseAbs().maxCoeff()));

    // c lies in the row space: applying A^+ A leaves it unchanged
    const Vec ac_re = (A * c).real();
    const Vec ac_im = (A * c).imag();
    const CVec rowspace = min_norm_fit(A, ac_re) +
                          Complex(0, 1) * min_norm_fit(A, ac_im);
    CHECK((c - rowspace).norm() <= 2e-8 * std::max(1.0, c.norm()));

    // min-norm against sampled null-space perturbations
    for (int rep = 0; rep < 5; ++rep) {
      CVec z(N);
      for (Index k = 0; k < N; ++k)
        z[k] = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
      z *= std::max(1.0, c.norm());
      const Vec az_re = (A * z).real();
      const Vec az_im = (A * z).imag();
      const CVec n = z - min_norm_fit(A, az_re) -
                     Complex(0, 1) * min_norm_fit(A, az_im);
      CHECK((A * n).cwiseAbs().maxCoeff() <= 1e-6 * std::max(1.0, z.norm()));
      CHECK(c.norm() <= (c + n).norm() + 1e-9);
    }

    // pseudo-inverse identities on the well-conditioned instance
    const CMat pinv = min_norm_fit_multi(A, Mat::Identity(m, m));
    CHECK((A * pinv * A - A).norm() <= 1e-8 * A.norm());
    CHECK((pinv * A * pinv - pinv).norm() <= 1e-8 * std::max(1.0, pinv.norm()));

    // norm bounds implied by the spectrum (the pseudo-inverse bound only
    // says anything when the spectrum concentrates, eta < 1/2)
    auto [lo, hi] = gram_spectrum_bounds(A);
    const double eta = std::max(1.0 - lo, hi - 1.0) / 2.0;
    Eigen::JacobiSVD<CMat> svd(A);
    const double a_norm2 = std::pow(svd.singularValues().maxCoeff(), 2);
    CHECK(a_norm2 <= double(N) * (1.0 + 2.0 * eta) * (1.0 + 1e-9));
    if (eta < 0.5) {
      const double pinv_norm2 =
          1.0 / std::pow(svd.singularValues().minCoeff(), 2);
      CHECK(pinv_norm2 <=
            (1.0 / (double(N) * (1.0 - 2.0 * eta))) * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("norm bounds hold in the concentrated regime") {
  // separation-scaled gamma and the sample-complexity N give eta < 1/2
  const Index m = 8;
  const double eta_target = 0.3;
  const double gamma = 7.0 * std::log(8.0 / eta_target);
  const Index N = 2400;
  const FeatureEnsemble ens = sample_cauchy(1, N, gamma, 2025);
  Mat pts(m, 1);
  for (Index j = 0; j < m; ++j) pts(j, 0) = double(j) / double(m - 1);
  const FeatureMatrix A = assemble(ens, pts);
  auto [lo, hi] = gram_spectrum_bounds(A);
  const double eta = std::max(1.0 - lo, hi - 1.0) / 2.0;
  REQUIRE(eta < 0.5);
  Eigen::JacobiSVD<CMat> svd(A);
  CHECK(std::pow(svd.singularValues().maxCoeff(), 2) <=
        double(N) * (1.0 + 2.0 * eta) * (1.0 + 1e-9));
  CHECK(1.0 / std::pow(svd.singularValues().minCoeff(), 2) <=
        (1.0 / (double(N) * (1.0 - 2.0 * eta))) * (1.0 + 1e-9));
}

TEST_CASE("degenerate scales fall back to the accurate route") {
  // near-constant features (operator-side regime): the gram is numerically
  // singular, but the targets are consistent with the feature geometry, so
  // the residual contract must still hold via the exact route
  const Index m = 30, N = 300;
  const FeatureEnsemble ens = sample_cauchy(1, N, 1e-6, 71);
  Mat pts(m, 1);
  for (Index j = 0; j < m; ++j) pts(j, 0) = (j + 0.5) / double(m);
  const FeatureMatrix A = assemble(ens, pts);
  // a target inside the numerically reachable span: affine in the points
  const Vec y = 2.0 * Vec::Ones(m) + 3.0 * pts.col(0);
  const CVec c = min_norm_fit(A, y);
  CHECK((A * c - y.cast<Complex>()).cwiseAbs().maxCoeff() <=
        1e-8 * std::max(1.0, y.cwiseAbs().maxCoeff()));
}

TEST_CASE("inconsistent duplicate constraints resolve to a bounded solve") {
  // two identical rows with conflicting targets: exact interpolation cannot
  // exist; the solver returns the regularized compromise instead of blowing up
  const Index N = 64;
  const FeatureEnsemble ens = sample_cauchy(1, N, 1.0, 81);
  Mat pts(3, 1);
  pts << 0.25, 0.25, 0.75;
  const FeatureMatrix A = assemble(ens, pts);
  Vec y(3);
  y << 1.0, -1.0, 0.5;
  const CVec c = MinNormSystem(A).solve_one(y);
  CHECK(c.norm() <= kCoefNormGuard * std::max(1.0, y.norm()));
  // fitted value on the duplicated point is the compromise between targets
  const Complex fitted = (A.row(0) * c).value();
  CHECK(std::abs(fitted.real() - 0.0) < 0.2);
  // the distinct constraint is still fit well
  CHECK(std::abs((A.row(2) * c).value().real() - 0.5) < 0.1);
}
