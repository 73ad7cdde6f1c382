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

#ifndef RFOL_DATAGEN_HPP_
#define RFOL_DATAGEN_HPP_

#include <functional>

#include "rfol/rng.hpp"
#include "rfol/types.hpp"

namespace rfol {

// Periodic transport benchmarks on (0, 1): inputs are random initial
// conditions sampled on the midpoint grid, outputs the exact solution at
// t = 1/2, i.e. the input advected by half a period with periodic wrap.
// At even resolution the output equals the input circularly shifted by
// resolution/2 cells, bit for bit.

struct Advection1Params {
  double center = 0.5;  // c ~ U[0.3, 0.7]
  double width = 0.45;  // b ~ U[0.3, 0.6]
  double height = 1.5;  // h ~ U[1, 2]
};

Advection1Params draw_advection1_params(SeededRng& rng);

/// height on [c - b/2, c + b/2], zero elsewhere.
double advection1_profile(double x, const Advection1Params& p);

// The square-wave-plus-half-ellipse initial condition. The parameter ranges
// below are this library's defaults; they produce well-separated profiles.
struct Advection2Params {
  double c1 = 0.3;  // U[0.2, 0.4]
  double w = 0.1;   // U[0.05, 0.15]
  double h1 = 1.0;  // U[0.5, 1.5]
  double c2 = 0.7;  // U[0.6, 0.8]
  double h2 = 1.0;  // U[0.5, 1.5]
  double a2 = 10.0; // U[5, 15]
};

Advection2Params draw_advection2_params(SeededRng& rng);

/// h1 on [c1 - w, c1 + w] plus sqrt(max(h2^2 - a2^2 (x - c2)^2, 0)).
double advection2_profile(double x, const Advection2Params& p);

OperatorDataset gen_advection1(Index sample_count, Index resolution,
                               std::uint64_t seed);
OperatorDataset gen_advection2(Index sample_count, Index resolution,
                               std::uint64_t seed);

/// Thresholded Gaussian random field inputs u = -1 + 2 * 1{u0 >= 0}, with u0
/// drawn from the spectral sampler below (power 2, inverse length scale tau).
OperatorDataset gen_advection3(Index sample_count, Index resolution,
                               std::uint64_t seed, double tau = 3.0);

/// Zero-mean Gaussian random field on an equispaced periodic grid (1-D or a
/// row-major 2-D lattice): i.i.d. standard normal Fourier coefficients,
/// mode k scaled by (lambda_k + tau^2)^(-power) where lambda_k is the
/// discrete Laplacian symbol 4 n^2 sin^2(pi k / n) (summed per axis in 2-D),
/// mode zero excluded. Nyquist modes are dropped.
FieldSample gp_sample(const GridPtr& grid, double tau, double power,
                      std::uint64_t seed);

/// Synthetic regression target in the Laplace RKHS: a finite expansion
/// f(x) = sum_i a_i exp(-gamma |x - z_i|) with random centers and weights.
struct RkhsRegressionTask {
  GridPtr grid;     // sample_count equispaced points on [0, 1]
  Vec values;       // f at the grid points
  Vec centers;      // z_i ~ U[0, 1]
  Vec weights;      // a_i ~ U[-1, 1]
  double gamma = 1.0;

  double target(double x) const;
};

RkhsRegressionTask gen_rkhs_regression(Index sample_count, double kernel_gamma,
                                       Index center_count, std::uint64_t seed);

}  // namespace rfol

#endif  // RFOL_DATAGEN_HPP_
