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

#include "rfol/operator.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "rfol/parallel.hpp"
#include "rfol/rng.hpp"

namespace rfol {

namespace {

constexpr std::uint64_t kRecoverySeedStream = 0x7265636f76657279ull;  // "recovery"

// Lexicographic sort of row indices puts exact bitwise duplicates adjacent.
// Duplicated inputs collapse into one constraint per distinct input whose
// target is the mean of the group's outputs; for a duplicated row that is
// exactly the least-squares value the pseudo-inverse solution fits, so
// consistent duplicates are unchanged and conflicting ones resolve to their
// compromise instead of an unsolvable system.
struct DedupedSamples {
  Mat inputs;
  Mat outputs;
  Index conflict_count = 0;  // groups whose outputs disagreed
};

DedupedSamples dedupe_samples(const OperatorDataset& data) {
  const Index M = data.sample_count();
  std::vector<Index> order(M);
  std::iota(order.begin(), order.end(), Index{0});
  auto row_less = [&](Index a, Index b) {
    for (Index j = 0; j < data.inputs.cols(); ++j) {
      if (data.inputs(a, j) != data.inputs(b, j))
        return data.inputs(a, j) < data.inputs(b, j);
    }
    return false;
  };
  std::sort(order.begin(), order.end(), row_less);

  DedupedSamples out;
  std::vector<std::pair<Index, Index>> runs;  // [begin, end) into order
  for (Index i = 0; i < M;) {
    Index j = i + 1;
    while (j < M &&
           data.inputs.row(order[i]) == data.inputs.row(order[j]))
      ++j;
    runs.emplace_back(i, j);
    i = j;
  }
  out.inputs.resize(static_cast<Index>(runs.size()), data.inputs.cols());
  out.outputs.resize(static_cast<Index>(runs.size()), data.outputs.cols());
  for (size_t r = 0; r < runs.size(); ++r) {
    const auto [begin, end] = runs[r];
    out.inputs.row(r) = data.inputs.row(order[begin]);
    Vec mean = Vec::Zero(data.outputs.cols());
    bool conflict = false;
    for (Index i = begin; i < end; ++i) {
      mean += data.outputs.row(order[i]).transpose();
      if (data.outputs.row(order[i]) != data.outputs.row(order[begin]))
        conflict = true;
    }
    out.outputs.row(r) =
        (mean / static_cast<double>(end - begin)).transpose();
    if (conflict) ++out.conflict_count;
  }
  return out;
}

// Derived defaults for the output-side recovery map. The scale gamma ~ m/8
// keeps the implied Laplace kernel resolving a few grid cells and, together
// with N ~ 32 m, keeps the feature matrix numerically full rank; much
// smaller scales collapse the rank in double precision and make grid-value
// interpolation impossible.
RecoveryConfig resolve_recovery(const TrainConfig& config, Index output_count) {
  RecoveryConfig rec = config.recovery;
  const bool fully_derived = rec.feature_count == 0;
  if (rec.feature_count == 0)
    rec.feature_count = std::max<Index>(32 * output_count, 256);
  if (!(rec.gamma > 0.0))
    rec.gamma = std::max(1.0, static_cast<double>(output_count) / 8.0);
  if (fully_derived) {
    rec.distribution = FeatureDistribution::Cauchy;
    rec.seed = derive_seed(config.seed, kRecoverySeedStream);
  }
  return rec;
}

}  // namespace

RandomFeatureInterpolant recover(const GridPtr& grid,
                                 const Eigen::Ref<const Vec>& values,
                                 const RecoveryConfig& config) {
  if (!grid) throw ParamError("recover: null grid");
  if (values.size() != grid->count())
    throw ParamError("recover: " + std::to_string(values.size()) +
                     " values on a grid of " + std::to_string(grid->count()) +
                     " points");
  if (config.feature_count < grid->count())
    throw ParamError("recover: feature count " +
                     std::to_string(config.feature_count) +
                     " below the grid point count " +
                     std::to_string(grid->count()) +
                     " (overparametrization required)");
  FeatureEnsemble ensemble =
      sample_ensemble(config.distribution, grid->dim(), config.feature_count,
                      config.gamma, config.seed);
  const FeatureMatrix A = assemble(ensemble, grid->points);
  CVec coeffs = min_norm_fit(A, values);
  return RandomFeatureInterpolant{std::move(ensemble), std::move(coeffs),
                                  grid};
}

OperatorModel train_operator(const OperatorDataset& data,
                             const TrainConfig& config) {
  const Index M = data.sample_count();
  const Index n = data.inputs.cols();
  const Index m = data.outputs.cols();
  if (config.feature_count < M)
    throw ParamError("train_operator: feature count N=" +
                     std::to_string(config.feature_count) +
                     " below the training sample count M=" +
                     std::to_string(M) + " (interpolation regime needs N >= M)");

  FeatureEnsemble ensemble = sample_ensemble(
      config.distribution, n, config.feature_count, config.gamma, config.seed);
  CMat coeffs;
  const DedupedSamples unique = dedupe_samples(data);
  if (unique.inputs.rows() == M) {
    const MinNormSystem system(assemble(ensemble, data.inputs));
    coeffs = system.solve(data.outputs);
  } else {
    const MinNormSystem system(assemble(ensemble, unique.inputs));
    coeffs = system.solve(unique.outputs);
  }

  return OperatorModel{std::move(ensemble), std::move(coeffs),
                       data.input_grid, data.output_grid,
                       resolve_recovery(config, m)};
}

Vec predict_samples(const OperatorModel& model,
                    const Eigen::Ref<const Vec>& u) {
  if (u.size() != model.input_grid->count())
    throw ParamError("predict_samples: input length " +
                     std::to_string(u.size()) +
                     " does not match the input grid (" +
                     std::to_string(model.input_grid->count()) + " points)");
  const Vec phases = model.input_ensemble.frequencies * u;
  const Vec c = phases.array().cos();
  const Vec s = phases.array().sin();
  return model.coefficients.real().transpose() * c -
         model.coefficients.imag().transpose() * s;
}

Mat predict_samples_batch(const OperatorModel& model,
                          const Eigen::Ref<const Mat>& U) {
  if (U.cols() != model.input_grid->count())
    throw ParamError("predict_samples: input length " +
                     std::to_string(U.cols()) +
                     " does not match the input grid (" +
                     std::to_string(model.input_grid->count()) + " points)");
  Mat out(U.rows(), model.coefficients.cols());
  parallel_for(U.rows(), 64, [&](Index r0, Index r1) {
    const Mat phases = U.middleRows(r0, r1 - r0) *
                       model.input_ensemble.frequencies.transpose();
    out.middleRows(r0, r1 - r0) =
        phases.array().cos().matrix() * model.coefficients.real() -
        phases.array().sin().matrix() * model.coefficients.imag();
  });
  return out;
}

RecoveryOperator build_recovery(const OperatorModel& model) {
  const RecoveryConfig& rc = model.recovery;
  if (rc.feature_count < model.output_grid->count())
    throw ParamError("build_recovery: recovery feature count " +
                     std::to_string(rc.feature_count) +
                     " below the output grid point count " +
                     std::to_string(model.output_grid->count()));
  FeatureEnsemble ensemble =
      sample_ensemble(rc.distribution, model.output_grid->dim(),
                      rc.feature_count, rc.gamma, rc.seed);
  auto system = std::make_shared<const MinNormSystem>(
      assemble(ensemble, model.output_grid->points));
  return RecoveryOperator{std::move(ensemble), std::move(system)};
}

RandomFeatureInterpolant infer(const OperatorModel& model,
                               const RecoveryOperator& recovery,
                               const Eigen::Ref<const Vec>& u) {
  const Vec v = predict_samples(model, u);
  CVec coeffs = recovery.system->solve_one(v);
  return RandomFeatureInterpolant{recovery.ensemble, std::move(coeffs),
                                  model.output_grid};
}

RandomFeatureInterpolant infer(const OperatorModel& model,
                               const Eigen::Ref<const Vec>& u) {
  return infer(model, build_recovery(model), u);
}

}  // namespace rfol
