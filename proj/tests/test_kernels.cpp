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

#include <cmath>

#include "rfol/datagen.hpp"
#include "rfol/features.hpp"
#include "rfol/kernels.hpp"
#include "rfol/operator.hpp"
#include "rfol/rng.hpp"
#include "rfol/solver.hpp"

using namespace rfol;

TEST_CASE("kernels equal one at zero distance") {
  Vec x(2);
  x << 0.4, -1.0;
  CHECK(kernel_eval(KernelSpec{KernelKind::Rbf, 2.0, 1, 1}, x, x) == 1.0);
  CHECK(kernel_eval(KernelSpec{KernelKind::Laplace, 2.0, 1, 1}, x, x) == 1.0);
  CHECK(kernel_eval(KernelSpec{KernelKind::Matern, 1, 0.7, 1.6}, x, x) == 1.0);
}

TEST_CASE("rbf and laplace closed forms") {
  Vec x(1), y(1);
  x << 0.0;
  y << 1.0;
  CHECK(kernel_eval(KernelSpec{KernelKind::Rbf, 1.0, 1, 1}, x, y) ==
        doctest::Approx(0.36787944117144233).epsilon(1e-14));
  Vec a(2), b(2);
  a << 0.1, 0.7;
  b << -0.2, 0.3;
  CHECK(kernel_eval(KernelSpec{KernelKind::Laplace, 1.3, 1, 1}, a, b) ==
        doctest::Approx(std::exp(-1.3 * 0.7)).epsilon(1e-14));
}

TEST_CASE("matern half-integer closed forms") {
  // K_{1/2}(z) = sqrt(pi/2z) e^-z collapses the Matern to the exponential
  Vec x(1), y(1);
  x << 0.0;
  for (double r : {0.2, 1.0, 2.7}) {
    y << r;
    const double k_half =
        kernel_eval(KernelSpec{KernelKind::Matern, 1, 1.0, 0.5}, x, y);
    CHECK(k_half == doctest::Approx(std::exp(-r)).epsilon(1e-10));

    const double z15 = std::sqrt(3.0) * r;
    const double k_15 =
        kernel_eval(KernelSpec{KernelKind::Matern, 1, 1.0, 1.5}, x, y);
    CHECK(k_15 ==
          doctest::Approx((1.0 + z15) * std::exp(-z15)).epsilon(1e-10));

    const double z25 = std::sqrt(5.0) * r;
    const double k_25 =
        kernel_eval(KernelSpec{KernelKind::Matern, 1, 1.0, 2.5}, x, y);
    CHECK(k_25 == doctest::Approx((1.0 + z25 + z25 * z25 / 3.0) *
                                  std::exp(-z25))
                      .epsilon(1e-10));
  }
}

TEST_CASE("bessel K_nu agrees with the standard library across orders") {
  for (double nu : {0.0, 0.3, 0.5, 1.0, 1.7, 2.2, 3.9, 5.5}) {
    for (double x : {0.05, 0.4, 1.0, 1.9, 2.5, 7.0, 20.0}) {
      const double mine = modified_bessel_second_kind(nu, x);
      const double reference = std::cyl_bessel_k(nu, x);
      CHECK(mine == doctest::Approx(reference).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(modified_bessel_second_kind(1.0, 0.0), ParamError);
}

TEST_CASE("matern scale parameter behaves like a length scale") {
  Vec x(1), y(1);
  x << 0.0;
  y << 0.5;
  const double near =
      kernel_eval(KernelSpec{KernelKind::Matern, 1, 2.0, 1.5}, x, y);
  const double far =
      kernel_eval(KernelSpec{KernelKind::Matern, 1, 0.25, 1.5}, x, y);
  CHECK(near > far);
}

TEST_CASE("kernel_eval rejects invalid specs and mismatched dims") {
  Vec x(2), y(3);
  CHECK_THROWS_AS(
      kernel_eval(KernelSpec{KernelKind::Rbf, -1.0, 1, 1}, x, x),
      ParamError);
  CHECK_THROWS_AS(
      kernel_eval(KernelSpec{KernelKind::Rbf, 1.0, 1, 1}, x, y),
      ParamError);
}

TEST_CASE("kernel_fit basics") {
  // single center: K = [1], so w = y
  Mat one(1, 1);
  one << 0.5;
  Mat target(1, 1);
  target << 3.25;
  const auto single =
      kernel_fit(KernelSpec{KernelKind::Rbf, 1.0, 1, 1}, one, target);
  CHECK(single.size() == 1);
  CHECK(single[0].weights[0] == doctest::Approx(3.25).epsilon(1e-12));

  // zero targets: zero weights
  Mat centers(4, 1);
  centers << 0.0, 0.3, 0.6, 1.0;
  const auto zero = kernel_fit(KernelSpec{KernelKind::Rbf, 2.0, 1, 1},
                               centers, Mat::Zero(4, 2));
  for (const auto& interp : zero)
    CHECK(interp.weights.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("kernel_fit solves K w = y (residual oracle)") {
  SeededRng rng(12);
  Mat centers(5, 2);
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < 2; ++j) centers(i, j) = rng.uniform01();
  Vec y(5);
  for (Index i = 0; i < 5; ++i) y[i] = rng.uniform(-2, 2);
  const KernelSpec spec{KernelKind::Rbf, 1.5, 1, 1};
  const auto fit = kernel_fit(spec, centers, y);

  // residual recomputed with independent pairwise evaluations
  for (Index i = 0; i < 5; ++i) {
    double acc = 0.0;
    for (Index l = 0; l < 5; ++l)
      acc += fit[0].weights[l] *
             std::exp(-1.5 * (centers.row(i) - centers.row(l)).squaredNorm());
    CHECK(std::abs(acc - y[i]) <= 1e-8 * std::max(1.0, std::abs(y[i])));
  }
}

TEST_CASE("kernel_fit rejects duplicate centers") {
  Mat centers(3, 1);
  centers << 0.1, 0.1, 0.9;
  CHECK_THROWS_AS(kernel_fit(KernelSpec{KernelKind::Rbf, 1.0, 1, 1}, centers,
                             Mat::Zero(3, 1)),
                  DataError);
}

TEST_CASE("kernel_predict at centers and against a summation oracle") {
  SeededRng rng(21);
  Mat centers(7, 1);
  for (Index i = 0; i < 7; ++i) centers(i, 0) = (i + 0.5) / 7.0;
  Vec y(7);
  for (Index i = 0; i < 7; ++i) y[i] = rng.uniform(-1, 1);
  const KernelSpec spec{KernelKind::Laplace, 3.0, 1, 1};
  const auto fit = kernel_fit(spec, centers, y);

  for (Index i = 0; i < 7; ++i)
    CHECK(kernel_predict(fit[0], centers.row(i).transpose()) ==
          doctest::Approx(y[i]).epsilon(1e-8));

  KernelInterpolant zeroed = fit[0];
  zeroed.weights.setZero();
  CHECK(kernel_predict(zeroed, Vec::Constant(1, 0.4)) == 0.0);

  for (double x : {0.05, 0.42, 0.93}) {
    long double oracle = 0.0L;
    for (Index l = 0; l < 7; ++l)
      oracle += static_cast<long double>(fit[0].weights[l]) *
                expl(-3.0L * fabsl(static_cast<long double>(x) -
                                   static_cast<long double>(centers(l, 0))));
    CHECK(kernel_predict(fit[0], Vec::Constant(1, x)) ==
          doctest::Approx(static_cast<double>(oracle)).epsilon(1e-12));
  }
}

TEST_CASE("kernel matrices are symmetric and factorizable") {
  SeededRng rng(31);
  Mat pts(12, 2);
  for (Index i = 0; i < 12; ++i)
    for (Index j = 0; j < 2; ++j) pts(i, j) = rng.uniform01() + 0.15 * i;
  for (KernelKind kind :
       {KernelKind::Rbf, KernelKind::Laplace, KernelKind::Matern}) {
    KernelSpec spec{kind, 1.0, 1.0, 1.5};
    const Mat K = kernel_matrix(spec, pts, pts);
    CHECK((K - K.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    auto [llt, jitter] = cholesky_with_jitter(K, 1.0);
    CHECK(jitter <= 1e-8);
  }
}

TEST_CASE("cauchy random features approach laplace kernel interpolation") {
  // same gamma, heavily overparametrized; sup-norm agreement on a test grid
  const double gamma = 1.0;
  const Index m = 20;
  const Index N = 200000;
  int ok = 0;
  const int trials = 3;
  for (int t = 0; t < trials; ++t) {
    SeededRng rng(derive_seed(777, t));
    Mat pts(m, 1);
    for (Index j = 0; j < m; ++j) pts(j, 0) = rng.uniform01();
    Vec values(m);
    for (Index j = 0; j < m; ++j)
      values[j] = std::sin(6.283185307179586 * pts(j, 0));
    const GridPtr grid =
        make_grid(pts, Vec::Constant(1, 0.0), Vec::Constant(1, 1.0));

    RecoveryConfig rc{FeatureDistribution::Cauchy, gamma, N,
                      derive_seed(778, t)};
    const RandomFeatureInterpolant rf = recover(grid, values, rc);
    const auto kfit =
        kernel_fit(KernelSpec{KernelKind::Laplace, gamma, 1, 1}, pts, values);

    double sup = 0.0;
    for (Index i = 0; i < 100; ++i) {
      const Vec x = Vec::Constant(1, (i + 0.5) / 100.0);
      sup = std::max(sup,
                     std::abs(evaluate(rf, x) - kernel_predict(kfit[0], x)));
    }
    if (sup <= 0.05) ++ok;
  }
  CHECK(ok >= trials - 1);
}

TEST_CASE("kernel operator baseline interpolates its training data") {
  const OperatorDataset data = gen_advection1(40, 24, 3);
  const KernelOperatorModel model =
      train_kernel_operator(data, KernelSpec{KernelKind::Rbf, 0.5, 1, 1});
  const Mat preds = predict_samples_batch(model, data.inputs);
  for (Index l = 0; l < data.sample_count(); ++l)
    CHECK((preds.row(l) - data.outputs.row(l)).cwiseAbs().maxCoeff() <=
          1e-6 * std::max(1.0, data.outputs.row(l).cwiseAbs().maxCoeff()));
  const Vec single = predict_samples(model, data.inputs.row(5).transpose());
  CHECK((single.transpose() - preds.row(5)).cwiseAbs().maxCoeff() < 1e-12);
}
