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

#include "rfol/features.hpp"

#include "rfol/parallel.hpp"
#include "rfol/rng.hpp"

namespace rfol {

namespace {

constexpr double kMinGamma = 1e-100;

void check_sampling_args(Index dim, Index count, double gamma) {
  if (dim < 1) throw ParamError("feature sampling: dim must be >= 1");
  if (count < 1) throw ParamError("feature sampling: count must be >= 1");
  if (!(gamma > 0.0) || gamma < kMinGamma || !std::isfinite(gamma))
    throw ParamError("feature sampling: scale gamma must be positive and at "
                     "least 1e-100, got " + std::to_string(gamma));
}

}  // namespace

FeatureEnsemble sample_cauchy(Index dim, Index count, double gamma,
                              std::uint64_t seed) {
  check_sampling_args(dim, count, gamma);
  SeededRng rng(seed);
  Mat W(count, dim);
  for (Index k = 0; k < count; ++k)
    for (Index j = 0; j < dim; ++j) W(k, j) = rng.cauchy(gamma);
  return FeatureEnsemble{std::move(W), FeatureDistribution::Cauchy, gamma,
                         seed};
}

FeatureEnsemble sample_gaussian(Index dim, Index count, double gamma,
                                std::uint64_t seed) {
  check_sampling_args(dim, count, gamma);
  const double stddev = std::sqrt(2.0 * gamma);
  SeededRng rng(seed);
  Mat W(count, dim);
  for (Index k = 0; k < count; ++k)
    for (Index j = 0; j < dim; ++j) W(k, j) = rng.normal(stddev);
  return FeatureEnsemble{std::move(W), FeatureDistribution::Gaussian, gamma,
                         seed};
}

FeatureEnsemble sample_ensemble(FeatureDistribution distribution, Index dim,
                                Index count, double gamma,
                                std::uint64_t seed) {
  return distribution == FeatureDistribution::Cauchy
             ? sample_cauchy(dim, count, gamma, seed)
             : sample_gaussian(dim, count, gamma, seed);
}

FeatureMatrix assemble(const FeatureEnsemble& ensemble,
                       const Eigen::Ref<const Mat>& points) {
  if (points.cols() != ensemble.dim())
    throw ParamError("assemble: point dimension " +
                     std::to_string(points.cols()) +
                     " does not match ensemble dimension " +
                     std::to_string(ensemble.dim()));
  const Index m = points.rows();
  const Index N = ensemble.count();
  // Phase GEMM runs single-threaded; the elementwise cos/sin pass is split
  // over fixed row blocks.
  const Mat phases = points * ensemble.frequencies.transpose();
  FeatureMatrix A(m, N);
  parallel_for(m, 64, [&](Index r0, Index r1) {
    const Index rows = r1 - r0;
    A.middleRows(r0, rows).real() = phases.middleRows(r0, rows).array().cos();
    A.middleRows(r0, rows).imag() = phases.middleRows(r0, rows).array().sin();
  });
  return A;
}

double evaluate(const RandomFeatureInterpolant& interp,
                const Eigen::Ref<const Vec>& x) {
  if (x.size() != interp.ensemble.dim())
    throw ParamError("evaluate: point dimension " + std::to_string(x.size()) +
                     " does not match ensemble dimension " +
                     std::to_string(interp.ensemble.dim()));
  const Vec phases = interp.ensemble.frequencies * x;
  // Re(sum c_k e^{i phi_k}) = sum re(c_k) cos phi_k - im(c_k) sin phi_k
  return (interp.coefficients.real().array() * phases.array().cos() -
          interp.coefficients.imag().array() * phases.array().sin())
      .sum();
}

Vec evaluate_points(const RandomFeatureInterpolant& interp,
                    const Eigen::Ref<const Mat>& points) {
  if (points.cols() != interp.ensemble.dim())
    throw ParamError("evaluate: point dimension " +
                     std::to_string(points.cols()) +
                     " does not match ensemble dimension " +
                     std::to_string(interp.ensemble.dim()));
  Vec out(points.rows());
  parallel_for(points.rows(), 128, [&](Index r0, Index r1) {
    const Mat phases =
        points.middleRows(r0, r1 - r0) * interp.ensemble.frequencies.transpose();
    out.segment(r0, r1 - r0) =
        phases.array().cos().matrix() * interp.coefficients.real() -
        phases.array().sin().matrix() * interp.coefficients.imag();
  });
  return out;
}

}  // namespace rfol
