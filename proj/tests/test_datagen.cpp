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
#include "rfol/rng.hpp"

using namespace rfol;

TEST_CASE("advection-1 profile is the centered square wave") {
  Advection1Params p{0.5, 0.4, 1.0};
  CHECK(advection1_profile(0.31, p) == 1.0);
  CHECK(advection1_profile(0.69, p) == 1.0);
  CHECK(advection1_profile(0.29, p) == 0.0);
  CHECK(advection1_profile(0.71, p) == 0.0);
}

TEST_CASE("advection-1 transport is the exact half-period circular shift") {
  const Index res = 40;
  const OperatorDataset data = gen_advection1(25, res, 7);
  for (Index l = 0; l < data.sample_count(); ++l) {
    for (Index j = 0; j < res; ++j) {
      const Index src = (j - res / 2 + res) % res;
      CHECK(data.outputs(l, j) == data.inputs(l, src));  // bitwise
    }
  }
}

TEST_CASE("advection-1 conserves mass under the grid-aligned shift") {
  const OperatorDataset data = gen_advection1(50, 40, 11);
  for (Index l = 0; l < data.sample_count(); ++l) {
    CHECK(data.outputs.row(l).sum() ==
          doctest::Approx(data.inputs.row(l).sum()).epsilon(1e-12));
  }
}

TEST_CASE("advection-1 shift wraps the support periodically") {
  // (c, b, h) = (0.5, 0.4, 1): input is 1 on [0.3, 0.7]; the shifted output
  // is supported on [0.8, 1] union [0, 0.2]
  const GridPtr grid = periodic_grid(40);
  Advection1Params p{0.5, 0.4, 1.0};
  Vec u(40), v(40);
  for (Index j = 0; j < 40; ++j)
    u[j] = advection1_profile(grid->points(j, 0), p);
  for (Index j = 0; j < 40; ++j) v[j] = u[(j - 20 + 40) % 40];
  for (Index j = 0; j < 40; ++j) {
    const double x = grid->points(j, 0);
    const bool in_support = (x >= 0.8 || x <= 0.2);
    CHECK(v[j] == (in_support ? 1.0 : 0.0));
  }
}

TEST_CASE("advection-1 parameter marginals match their ranges") {
  double c = 0, b = 0, h = 0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    SeededRng rng(derive_seed(99, i));
    const Advection1Params p = draw_advection1_params(rng);
    c += p.center;
    b += p.width;
    h += p.height;
  }
  CHECK(c / draws == doctest::Approx(0.5).epsilon(0.02));
  CHECK(b / draws == doctest::Approx(0.45).epsilon(0.02));
  CHECK(h / draws == doctest::Approx(1.5).epsilon(0.02));
}

TEST_CASE("advection-2 degenerate profiles") {
  Advection2Params p;
  p.h1 = 0.0;  // pure half-ellipse bump
  p.c2 = 0.7;
  p.h2 = 1.0;
  p.a2 = 10.0;
  CHECK(advection2_profile(0.7, p) == doctest::Approx(1.0));
  CHECK(advection2_profile(0.3, p) == 0.0);

  Advection2Params q;
  q.h2 = 0.0;  // reduces to the square wave
  q.c1 = 0.3;
  q.w = 0.1;
  q.h1 = 1.2;
  CHECK(advection2_profile(0.3, q) == 1.2);
  CHECK(advection2_profile(0.45, q) == 0.0);
}

TEST_CASE("advection-2 outputs are the integer shift at even resolution") {
  const Index res = 40;
  const OperatorDataset data = gen_advection2(20, res, 13);
  for (Index l = 0; l < data.sample_count(); ++l)
    for (Index j = 0; j < res; ++j)
      CHECK(data.outputs(l, j) == data.inputs(l, (j - 20 + res) % res));
}

TEST_CASE("advection-3 fields are sign patterns on interleaved grids") {
  const OperatorDataset data = gen_advection3(40, 200, 17);
  for (Index l = 0; l < data.sample_count(); ++l)
    for (Index j = 0; j < 200; ++j) {
      CHECK(std::abs(data.inputs(l, j)) == 1.0);
      CHECK(std::abs(data.outputs(l, j)) == 1.0);
    }
  // input grid holds cell midpoints, output grid the cell boundaries
  CHECK(data.input_grid->points(0, 0) == doctest::Approx(0.5 / 200.0));
  CHECK(data.output_grid->points(0, 0) == 0.0);
  CHECK(data.output_grid->points(1, 0) == doctest::Approx(1.0 / 200.0));
}

TEST_CASE("advection-3 sign balance is symmetric") {
  const OperatorDataset data = gen_advection3(1000, 100, 19);
  double positives = 0;
  for (Index l = 0; l < data.sample_count(); ++l)
    for (Index j = 0; j < 100; ++j)
      if (data.inputs(l, j) > 0) positives += 1;
  const double fraction = positives / double(1000 * 100);
  CHECK(fraction >= 0.45);
  CHECK(fraction <= 0.55);
}

TEST_CASE("generators are deterministic in the seed") {
  const OperatorDataset a1 = gen_advection1(10, 16, 23);
  const OperatorDataset b1 = gen_advection1(10, 16, 23);
  CHECK(a1.inputs == b1.inputs);
  CHECK(a1.outputs == b1.outputs);
  const OperatorDataset a3 = gen_advection3(5, 50, 29);
  const OperatorDataset b3 = gen_advection3(5, 50, 29);
  CHECK(a3.inputs == b3.inputs);
  CHECK(a3.outputs == b3.outputs);
  const FieldSample g1 = gp_sample(periodic_grid(64), 3.0, 2.0, 31);
  const FieldSample g2 = gp_sample(periodic_grid(64), 3.0, 2.0, 31);
  CHECK(g1.values == g2.values);
}

TEST_CASE("gp samples have zero spatial mean") {
  const GridPtr grid = periodic_grid(128);
  for (int t = 0; t < 20; ++t) {
    const FieldSample f = gp_sample(grid, 3.0, 2.0, derive_seed(41, t));
    CHECK(std::abs(f.values.mean()) < 1e-12);
  }
}

TEST_CASE("flat spectrum gives white noise at the documented variance") {
  const Index n = 64;
  const GridPtr grid = periodic_grid(n);
  const Index modes = (n - 1) / 2;  // Nyquist dropped
  const int draws = 10000;
  double acc = 0.0;
  for (int t = 0; t < draws; ++t) {
    const FieldSample f = gp_sample(grid, 1.0, 0.0, derive_seed(43, t));
    acc += f.values.squaredNorm() / double(n);
  }
  const double variance = acc / draws;
  CHECK(variance == doctest::Approx(double(modes)).epsilon(0.05));
}

TEST_CASE("empirical covariance matches the analytic spectrum") {
  const Index n = 100;
  const double tau = 3.0;
  const double power = 2.0;
  const GridPtr grid = periodic_grid(n);
  const Index modes = (n - 1) / 2;

  // analytic stationary covariance from the sampled spectrum
  Vec scale2(modes);
  for (Index k = 1; k <= modes; ++k) {
    const double s = std::sin(3.14159265358979323846 * k / double(n));
    const double lambda = 4.0 * n * n * s * s;
    scale2[k - 1] = std::pow(lambda + tau * tau, -2.0 * power);
  }
  Mat analytic(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      double cov = 0.0;
      const double dt = grid->points(i, 0) - grid->points(j, 0);
      for (Index k = 1; k <= modes; ++k)
        cov += scale2[k - 1] *
               std::cos(2.0 * 3.14159265358979323846 * k * dt);
      analytic(i, j) = cov;
    }

  const int draws = 10000;
  Mat empirical = Mat::Zero(n, n);
  for (int t = 0; t < draws; ++t) {
    const FieldSample f = gp_sample(grid, tau, power, derive_seed(47, t));
    empirical.noalias() += f.values * f.values.transpose();
  }
  empirical /= double(draws);
  CHECK((empirical - analytic).norm() / analytic.norm() < 0.05);
}

TEST_CASE("2-D gp samples run on a row-major lattice") {
  const Index n1 = 8, n2 = 8;
  Mat pts(n1 * n2, 2);
  for (Index i = 0; i < n1; ++i)
    for (Index j = 0; j < n2; ++j) {
      pts(i * n2 + j, 0) = (i + 0.5) / double(n1);
      pts(i * n2 + j, 1) = (j + 0.5) / double(n2);
    }
  const GridPtr grid =
      make_grid(pts, Vec::Constant(2, 0.0), Vec::Constant(2, 1.0));
  const FieldSample f = gp_sample(grid, 3.0, 1.0, 53);
  CHECK(f.values.size() == n1 * n2);
  CHECK(std::abs(f.values.mean()) < 1e-12);
  CHECK(f.values.cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("gp_sample rejects grids without the periodic structure") {
  SeededRng rng(3);
  Mat pts(16, 1);
  for (Index j = 0; j < 16; ++j) pts(j, 0) = rng.uniform01();
  std::sort(pts.data(), pts.data() + 16);
  const GridPtr grid =
      make_grid(pts, Vec::Constant(1, 0.0), Vec::Constant(1, 1.0));
  CHECK_THROWS_AS(gp_sample(grid, 3.0, 2.0, 1), DataError);
  CHECK_THROWS_AS(gp_sample(periodic_grid(16), 0.0, 2.0, 1), ParamError);
}

TEST_CASE("rkhs regression tasks evaluate their closed form") {
  RkhsRegressionTask manual;
  manual.gamma = 2.0;
  manual.centers = Vec::Constant(1, 0.5);
  manual.weights = Vec::Constant(1, 1.0);
  CHECK(manual.target(0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(manual.target(0.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));

  manual.weights.setZero();
  CHECK(manual.target(0.3) == 0.0);

  const RkhsRegressionTask task = gen_rkhs_regression(20, 4.0, 6, 59);
  for (Index j = 0; j < 20; ++j) {
    const double x = task.grid->points(j, 0);
    double expected = 0.0;
    for (Index i = 0; i < 6; ++i)
      expected += task.weights[i] * std::exp(-4.0 * std::abs(x - task.centers[i]));
    CHECK(std::abs(task.values[j] - expected) < 1e-14);
  }
}
