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

#include "rfol/datagen.hpp"

#include <cmath>

#include "rfol/parallel.hpp"

namespace rfol {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

double wrap_unit(double t) {
  t -= std::floor(t);
  return t;
}

// Exact transport by half a period. With the shift an integer number of
// cells the output is the circular shift of the sampled input; otherwise the
// profile is evaluated at the wrapped points.
template <class Profile>
void transport_pair(const CollocationGrid& grid, const Profile& profile,
                    Vec& u, Vec& v) {
  const Index n = grid.count();
  u.resize(n);
  v.resize(n);
  for (Index j = 0; j < n; ++j) u[j] = profile(grid.points(j, 0));
  if (n % 2 == 0) {
    const Index shift = n / 2;
    for (Index j = 0; j < n; ++j) v[j] = u[(j - shift + n) % n];
  } else {
    for (Index j = 0; j < n; ++j)
      v[j] = profile(wrap_unit(grid.points(j, 0) - 0.5));
  }
}

// Discrete Laplacian symbol of mode k on an n-point periodic unit grid.
double laplacian_symbol(Index k, Index n) {
  const double s = std::sin(kTwoPi * 0.5 * static_cast<double>(k) /
                            static_cast<double>(n));
  return 4.0 * static_cast<double>(n) * static_cast<double>(n) * s * s;
}

// Modal representation of a real zero-mean periodic field,
// u(t) = sum_k scale_k (a_k cos(2 pi k t) + b_k sin(2 pi k t)).
struct Modes1D {
  Vec cos_coeff;  // scale_k * a_k, k = 1 .. K
  Vec sin_coeff;  // scale_k * b_k

  double operator()(double t) const {
    double acc = 0.0;
    for (Index k = 0; k < cos_coeff.size(); ++k) {
      const double phase = kTwoPi * static_cast<double>(k + 1) * t;
      acc += cos_coeff[k] * std::cos(phase) + sin_coeff[k] * std::sin(phase);
    }
    return acc;
  }
};

// Per mode k (ascending): draw a_k then b_k.
Modes1D draw_modes_1d(Index n, double tau, double power, SeededRng& rng) {
  const Index K = (n - 1) / 2;  // Nyquist dropped
  Modes1D modes;
  modes.cos_coeff.resize(K);
  modes.sin_coeff.resize(K);
  for (Index k = 1; k <= K; ++k) {
    const double scale =
        std::pow(laplacian_symbol(k, n) + tau * tau, -power);
    modes.cos_coeff[k - 1] = scale * rng.normal();
    modes.sin_coeff[k - 1] = scale * rng.normal();
  }
  return modes;
}

struct Lattice2D {
  Index n1 = 0, n2 = 0;  // rows (first axis) x columns (second axis)
  Vec t1, t2;            // per-axis unit coordinates
};

bool axis_is_periodic_equispaced(const Vec& x, double lo, double hi,
                                 double tol) {
  const Index n = x.size();
  if (n < 2) return false;
  const double h = x[1] - x[0];
  if (!(h > 0)) return false;
  for (Index j = 1; j < n; ++j)
    if (std::abs(x[j] - x[j - 1] - h) > tol) return false;
  // the wrap-around gap must match the spacing
  return std::abs((x[0] - lo) + (hi - x[n - 1]) - h) <= tol;
}

// Recognizes a row-major tensor lattice; returns false for anything else.
bool detect_lattice(const CollocationGrid& grid, Lattice2D& lattice) {
  const Index m = grid.count();
  Index n2 = 1;
  while (n2 < m && grid.points(n2, 0) == grid.points(0, 0)) ++n2;
  if (n2 < 2 || m % n2 != 0) return false;
  const Index n1 = m / n2;
  if (n1 < 2) return false;
  Vec x1(n1), x2(n2);
  for (Index i = 0; i < n1; ++i) x1[i] = grid.points(i * n2, 0);
  for (Index j = 0; j < n2; ++j) x2[j] = grid.points(j, 1);
  for (Index i = 0; i < n1; ++i)
    for (Index j = 0; j < n2; ++j) {
      if (grid.points(i * n2 + j, 0) != x1[i]) return false;
      if (grid.points(i * n2 + j, 1) != x2[j]) return false;
    }
  const double tol1 = 1e-9 * (grid.hi[0] - grid.lo[0]);
  const double tol2 = 1e-9 * (grid.hi[1] - grid.lo[1]);
  if (!axis_is_periodic_equispaced(x1, grid.lo[0], grid.hi[0], tol1) ||
      !axis_is_periodic_equispaced(x2, grid.lo[1], grid.hi[1], tol2))
    return false;
  lattice.n1 = n1;
  lattice.n2 = n2;
  lattice.t1 = (x1.array() - grid.lo[0]) / (grid.hi[0] - grid.lo[0]);
  lattice.t2 = (x2.array() - grid.lo[1]) / (grid.hi[1] - grid.lo[1]);
  return true;
}

Vec gp_values_1d(const CollocationGrid& grid, const Modes1D& modes) {
  const double span = grid.hi[0] - grid.lo[0];
  Vec values(grid.count());
  for (Index j = 0; j < grid.count(); ++j)
    values[j] = modes((grid.points(j, 0) - grid.lo[0]) / span);
  return values;
}

OperatorDataset gen_transport(Index sample_count, Index resolution,
                              std::uint64_t seed, int problem) {
  if (sample_count < 1)
    throw ParamError("gen_advection: sample count must be >= 1");
  if (resolution < 2)
    throw ParamError("gen_advection: resolution must be >= 2");
  const GridPtr grid = periodic_grid(resolution);
  Mat inputs(sample_count, resolution);
  Mat outputs(sample_count, resolution);
  parallel_for(sample_count, 16, [&](Index l0, Index l1) {
    Vec u, v;
    for (Index l = l0; l < l1; ++l) {
      SeededRng rng(derive_seed(seed, static_cast<std::uint64_t>(l)));
      if (problem == 1) {
        const Advection1Params p = draw_advection1_params(rng);
        transport_pair(
            *grid, [&](double x) { return advection1_profile(x, p); }, u, v);
      } else {
        const Advection2Params p = draw_advection2_params(rng);
        transport_pair(
            *grid, [&](double x) { return advection2_profile(x, p); }, u, v);
      }
      inputs.row(l) = u.transpose();
      outputs.row(l) = v.transpose();
    }
  });
  return make_dataset(grid, grid, std::move(inputs), std::move(outputs));
}

}  // namespace

Advection1Params draw_advection1_params(SeededRng& rng) {
  Advection1Params p;
  p.center = rng.uniform(0.3, 0.7);
  p.width = rng.uniform(0.3, 0.6);
  p.height = rng.uniform(1.0, 2.0);
  return p;
}

double advection1_profile(double x, const Advection1Params& p) {
  const double half = 0.5 * p.width;
  return (x >= p.center - half && x <= p.center + half) ? p.height : 0.0;
}

Advection2Params draw_advection2_params(SeededRng& rng) {
  Advection2Params p;
  p.c1 = rng.uniform(0.2, 0.4);
  p.w = rng.uniform(0.05, 0.15);
  p.h1 = rng.uniform(0.5, 1.5);
  p.c2 = rng.uniform(0.6, 0.8);
  p.h2 = rng.uniform(0.5, 1.5);
  p.a2 = rng.uniform(5.0, 15.0);
  return p;
}

double advection2_profile(double x, const Advection2Params& p) {
  const double square =
      (x >= p.c1 - p.w && x <= p.c1 + p.w) ? p.h1 : 0.0;
  const double dx = x - p.c2;
  const double under = p.h2 * p.h2 - p.a2 * p.a2 * dx * dx;
  return square + std::sqrt(std::max(under, 0.0));
}

OperatorDataset gen_advection1(Index sample_count, Index resolution,
                               std::uint64_t seed) {
  return gen_transport(sample_count, resolution, seed, 1);
}

OperatorDataset gen_advection2(Index sample_count, Index resolution,
                               std::uint64_t seed) {
  return gen_transport(sample_count, resolution, seed, 2);
}

OperatorDataset gen_advection3(Index sample_count, Index resolution,
                               std::uint64_t seed, double tau) {
  if (sample_count < 1)
    throw ParamError("gen_advection3: sample count must be >= 1");
  if (resolution < 2)
    throw ParamError("gen_advection3: resolution must be >= 2");
  if (!(tau > 0)) throw ParamError("gen_advection3: tau must be positive");
  // The output grid interleaves the input grid by half a cell, matching the
  // source benchmark's discretization: the transported field is thresholded
  // at points that are not input sample sites, so the cells containing a
  // sign change of the underlying random field are genuinely ambiguous given
  // the input vector. This is what makes the problem hard for smooth models.
  const GridPtr in_grid = periodic_grid(resolution);
  Mat out_points(resolution, 1);
  for (Index j = 0; j < resolution; ++j)
    out_points(j, 0) =
        static_cast<double>(j) / static_cast<double>(resolution);
  const GridPtr out_grid = make_grid(std::move(out_points),
                                     Vec::Constant(1, 0.0),
                                     Vec::Constant(1, 1.0));
  Mat inputs(sample_count, resolution);
  Mat outputs(sample_count, resolution);
  parallel_for(sample_count, 8, [&](Index l0, Index l1) {
    for (Index l = l0; l < l1; ++l) {
      SeededRng rng(derive_seed(seed, static_cast<std::uint64_t>(l)));
      const Modes1D modes = draw_modes_1d(resolution, tau, 2.0, rng);
      for (Index j = 0; j < resolution; ++j)
        inputs(l, j) = modes(in_grid->points(j, 0)) >= 0.0 ? 1.0 : -1.0;
      for (Index j = 0; j < resolution; ++j) {
        const double t = wrap_unit(out_grid->points(j, 0) - 0.5);
        outputs(l, j) = modes(t) >= 0.0 ? 1.0 : -1.0;
      }
    }
  });
  return make_dataset(in_grid, out_grid, std::move(inputs),
                      std::move(outputs));
}

FieldSample gp_sample(const GridPtr& grid, double tau, double power,
                      std::uint64_t seed) {
  if (!grid) throw ParamError("gp_sample: null grid");
  if (!(tau > 0)) throw ParamError("gp_sample: tau must be positive");
  SeededRng rng(seed);

  if (grid->dim() == 1) {
    const Vec x = grid->points.col(0);
    const double tol = 1e-9 * (grid->hi[0] - grid->lo[0]);
    if (!axis_is_periodic_equispaced(x, grid->lo[0], grid->hi[0], tol))
      throw DataError("gp_sample: grid is not equispaced periodic");
    const Modes1D modes = draw_modes_1d(grid->count(), tau, power, rng);
    return make_field(grid, gp_values_1d(*grid, modes));
  }

  if (grid->dim() == 2) {
    Lattice2D lat;
    if (!detect_lattice(*grid, lat))
      throw DataError(
          "gp_sample: 2-D grid is not a row-major equispaced periodic "
          "lattice");
    // Half-plane modes (k1 > 0) or (k1 == 0 and k2 > 0); per mode draw the
    // cosine then the sine coefficient. Nyquist modes dropped.
    const Index K1 = (lat.n1 - 1) / 2;
    const Index K2 = (lat.n2 - 1) / 2;
    Vec values = Vec::Zero(grid->count());
    for (Index k1 = 0; k1 <= K1; ++k1) {
      const Index k2_begin = k1 == 0 ? 1 : -K2;
      for (Index k2 = k2_begin; k2 <= K2; ++k2) {
        const double scale = std::pow(laplacian_symbol(k1, lat.n1) +
                                          laplacian_symbol(std::abs(k2),
                                                           lat.n2) +
                                          tau * tau,
                                      -power);
        const double ca = scale * rng.normal();
        const double cb = scale * rng.normal();
        for (Index i = 0; i < lat.n1; ++i) {
          const double p1 = static_cast<double>(k1) * lat.t1[i];
          for (Index j = 0; j < lat.n2; ++j) {
            const double phase =
                kTwoPi * (p1 + static_cast<double>(k2) * lat.t2[j]);
            values[i * lat.n2 + j] +=
                ca * std::cos(phase) + cb * std::sin(phase);
          }
        }
      }
    }
    return make_field(grid, std::move(values));
  }

  throw ParamError("gp_sample: only 1-D and 2-D grids are supported");
}

double RkhsRegressionTask::target(double x) const {
  double acc = 0.0;
  for (Index i = 0; i < centers.size(); ++i)
    acc += weights[i] * std::exp(-gamma * std::abs(x - centers[i]));
  return acc;
}

RkhsRegressionTask gen_rkhs_regression(Index sample_count, double kernel_gamma,
                                       Index center_count,
                                       std::uint64_t seed) {
  if (sample_count < 2)
    throw ParamError("gen_rkhs_regression: needs at least 2 samples");
  if (center_count < 1)
    throw ParamError("gen_rkhs_regression: needs at least 1 center");
  if (!(kernel_gamma > 0))
    throw ParamError("gen_rkhs_regression: gamma must be positive");
  RkhsRegressionTask task;
  task.gamma = kernel_gamma;
  task.grid = equispaced_grid(sample_count, 0.0, 1.0);
  task.centers.resize(center_count);
  task.weights.resize(center_count);
  SeededRng rng(seed);
  for (Index i = 0; i < center_count; ++i) {  // per center: z_i then a_i
    task.centers[i] = rng.uniform01();
    task.weights[i] = rng.uniform(-1.0, 1.0);
  }
  task.values.resize(sample_count);
  for (Index j = 0; j < sample_count; ++j)
    task.values[j] = task.target(task.grid->points(j, 0));
  return task;
}

}  // namespace rfol
