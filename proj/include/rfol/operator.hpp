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

#ifndef RFOL_OPERATOR_HPP_
#define RFOL_OPERATOR_HPP_

#include "rfol/solver.hpp"
#include "rfol/types.hpp"

namespace rfol {

struct TrainConfig {
  FeatureDistribution distribution = FeatureDistribution::Cauchy;
  double gamma = 1.0;
  Index feature_count = 0;
  std::uint64_t seed = 0;
  // When recovery.feature_count is 0, training derives the defaults: same
  // distribution, gamma 1, max(4 m, 256) features, seed split off `seed`.
  RecoveryConfig recovery;
};

/// Recovery map: min-norm interpolant through `values` at the grid points,
/// with frequencies sampled from `config`. Requires feature_count >= grid
/// point count.
RandomFeatureInterpolant recover(const GridPtr& grid,
                                 const Eigen::Ref<const Vec>& values,
                                 const RecoveryConfig& config);

/// Trains the composed estimator: samples the input-side ensemble over R^n,
/// assembles A(l, k) = exp(i <omega_k, u_l>), and solves the m per-output
/// min-norm problems against one shared Gram factorization. Exact duplicate
/// training inputs are rejected before solving.
OperatorModel train_operator(const OperatorDataset& data,
                             const TrainConfig& config);

/// Component j = Re( sum_k coeff(k, j) exp(i <omega_k, u>) ).
Vec predict_samples(const OperatorModel& model,
                    const Eigen::Ref<const Vec>& u);

/// predict_samples for many inputs (one row per input sample).
Mat predict_samples_batch(const OperatorModel& model,
                          const Eigen::Ref<const Mat>& U);

/// Output-side ensemble and factored interpolation system, built once per
/// model and shared by every inference call.
struct RecoveryOperator {
  FeatureEnsemble ensemble;
  std::shared_ptr<const MinNormSystem> system;
};

RecoveryOperator build_recovery(const OperatorModel& model);

/// Full function estimate G_hat(u) = R_v o f_hat o S_u (u): predicts the
/// output samples and interpolates them on the output grid.
RandomFeatureInterpolant infer(const OperatorModel& model,
                               const RecoveryOperator& recovery,
                               const Eigen::Ref<const Vec>& u);

/// Convenience overload building the recovery operator on the fly.
RandomFeatureInterpolant infer(const OperatorModel& model,
                               const Eigen::Ref<const Vec>& u);

}  // namespace rfol

#endif  // RFOL_OPERATOR_HPP_
