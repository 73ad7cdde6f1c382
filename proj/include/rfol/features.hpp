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

#ifndef RFOL_FEATURES_HPP_
#define RFOL_FEATURES_HPP_

#include "rfol/types.hpp"

namespace rfol {

/// Dense feature matrix with A(j, k) = exp(i <omega_k, x_j>); rows indexed by
/// evaluation points, columns by frequencies. Every entry has modulus 1.
using FeatureMatrix = CMat;

/// Frequencies with i.i.d. coordinates from the Cauchy law with density
/// 1 / (pi g (1 + w^2 / g^2)). Coordinates are drawn coordinate-major within
/// each frequency, so an ensemble with a larger count extends a smaller one
/// drawn from the same seed.
FeatureEnsemble sample_cauchy(Index dim, Index count, double gamma,
                              std::uint64_t seed);

/// Frequencies with i.i.d. N(0, 2 gamma) coordinates, same ordering contract
/// as sample_cauchy.
FeatureEnsemble sample_gaussian(Index dim, Index count, double gamma,
                                std::uint64_t seed);

FeatureEnsemble sample_ensemble(FeatureDistribution distribution, Index dim,
                                Index count, double gamma, std::uint64_t seed);

/// Assembles the feature matrix for one row per point. Parallel over row
/// blocks; the result is independent of the worker count.
FeatureMatrix assemble(const FeatureEnsemble& ensemble,
                       const Eigen::Ref<const Mat>& points);

/// Re( sum_k c_k exp(i <omega_k, x>) ).
double evaluate(const RandomFeatureInterpolant& interp,
                const Eigen::Ref<const Vec>& x);

/// evaluate() at many points (one row per point).
Vec evaluate_points(const RandomFeatureInterpolant& interp,
                    const Eigen::Ref<const Mat>& points);

}  // namespace rfol

#endif  // RFOL_FEATURES_HPP_
