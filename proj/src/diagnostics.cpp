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

#include "rfol/diagnostics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>

#include "rfol/datagen.hpp"
#include "rfol/features.hpp"
#include "rfol/operator.hpp"
#include "rfol/parallel.hpp"
#include "rfol/rng.hpp"
#include "rfol/solver.hpp"

namespace rfol {

namespace {

double radical_inverse(std::uint64_t index, std::uint64_t base) {
  double inv_base = 1.0 / static_cast<double>(base);
  double scale = inv_base;
  double value = 0.0;
  while (index > 0) {
    value += static_cast<double>(index % base) * scale;
    index /= base;
    scale *= inv_base;
  }
  return value;
}

constexpr std::uint64_t kHaltonBases[] = {2,  3,  5,  7,  11, 13, 17, 19,
                                          23, 29, 31, 37, 41, 43, 47, 53};

double median_of(std::vector<double> values) {
  const size_t n = values.size();
  std::nth_element(values.begin(), values.begin() + n / 2, values.end());
  double hi = values[n / 2];
  if (n % 2 == 1) return hi;
  std::nth_element(values.begin(), values.begin() + n / 2 - 1, values.end());
  return 0.5 * (values[n / 2 - 1] + hi);
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch())
      .count();
}

}  // namespace

double fill_in_distance(const CollocationGrid& grid, Index probe_count,
                        std::uint64_t seed) {
  if (grid.count() < 1) throw ParamError("fill_in_distance: empty grid");
  const Index d = grid.dim();
  if (d > static_cast<Index>(std::size(kHaltonBases)))
    throw ParamError("fill_in_distance: dimension above " +
                     std::to_string(std::size(kHaltonBases)));
  if (probe_count < 1000)
    throw ParamError("fill_in_distance: needs at least 1000 probes");

  // Cranley-Patterson rotation of the Halton sequence
  SeededRng rng(seed);
  Vec shift(d);
  for (Index i = 0; i < d; ++i) shift[i] = rng.uniform01();

  const Vec extent = grid.hi - grid.lo;
  std::vector<double> block_max((probe_count + 4095) / 4096, 0.0);
  parallel_for(probe_count, 4096, [&](Index p0, Index p1) {
    double worst = 0.0;
    Vec probe(d);
    for (Index p = p0; p < p1; ++p) {
      for (Index i = 0; i < d; ++i) {
        double t = radical_inverse(static_cast<std::uint64_t>(p) + 1,
                                   kHaltonBases[i]) +
                   shift[i];
        t -= std::floor(t);
        probe[i] = grid.lo[i] + extent[i] * t;
      }
      double nearest = std::numeric_limits<double>::infinity();
      for (Index j = 0; j < grid.count(); ++j) {
        const double d2 =
            (grid.points.row(j).transpose() - probe).squaredNorm();
        if (d2 < nearest) nearest = d2;
      }
      worst = std::max(worst, nearest);
    }
    block_max[p0 / 4096] = worst;
  });
  double h2 = 0.0;
  for (double b : block_max) h2 = std::max(h2, b);
  return std::sqrt(h2);
}

ConcentrationResult concentration_check(const CollocationGrid& grid,
                                        FeatureDistribution distribution,
                                        double gamma, Index feature_count,
                                        int trials, std::uint64_t seed) {
  if (trials < 1) throw ParamError("concentration_check: trials must be >= 1");
  const Index m = grid.count();

  ConcentrationResult result;
  result.deviations.assign(trials, 0.0);
  result.separation = m >= 2 ? min_separation(grid) : 0.0;
  result.eta = std::sqrt(6.0 * static_cast<double>(m) *
                         std::log(static_cast<double>(m) /
                                  (2.0 * kConcentrationDelta)) /
                         static_cast<double>(feature_count));
  result.bound = 2.0 * result.eta;
  result.gamma_required =
      result.separation > 0.0
          ? std::log(static_cast<double>(m) / result.eta) / result.separation
          : 0.0;

  parallel_for(trials, 1, [&](Index t0, Index t1) {
    for (Index t = t0; t < t1; ++t) {
      const FeatureEnsemble ensemble =
          sample_ensemble(distribution, grid.dim(), feature_count, gamma,
                          derive_seed(seed, static_cast<std::uint64_t>(t)));
      const FeatureMatrix A = assemble(ensemble, grid.points);
      CMat G = gram_matrix(A) / static_cast<double>(feature_count);
      G.diagonal().array() -= 1.0;
      Eigen::SelfAdjointEigenSolver<CMat> eig(G, Eigen::EigenvaluesOnly);
      result.deviations[t] = eig.eigenvalues().cwiseAbs().maxCoeff();
    }
  });

  std::vector<double> sorted = result.deviations;
  std::sort(sorted.begin(), sorted.end());
  const size_t idx = static_cast<size_t>(
      std::ceil(0.95 * static_cast<double>(trials))) - 1;
  result.deviation_p95 = sorted[std::min(idx, sorted.size() - 1)];
  return result;
}

double relative_test_error(const Eigen::Ref<const Mat>& predictions,
                           const Eigen::Ref<const Mat>& truths) {
  if (predictions.rows() != truths.rows() ||
      predictions.cols() != truths.cols())
    throw ParamError("relative_test_error: shape mismatch");
  const double denom = truths.squaredNorm();
  if (denom == 0.0)
    throw DataError("relative_test_error: all-zero truth set");
  return std::sqrt((predictions - truths).squaredNorm() / denom);
}

double relative_test_error(const std::vector<FieldSample>& predictions,
                           const std::vector<FieldSample>& truths) {
  if (predictions.size() != truths.size() || truths.empty())
    throw ParamError("relative_test_error: needs equally many predictions "
                     "and truths");
  const GridPtr grid = truths.front().grid;
  double num = 0.0;
  double denom = 0.0;
  for (size_t k = 0; k < truths.size(); ++k) {
    if (predictions[k].grid->count() != grid->count() ||
        truths[k].grid->count() != grid->count())
      throw ParamError("relative_test_error: samples on mismatched grids");
    num += (predictions[k].values - truths[k].values).squaredNorm();
    denom += truths[k].values.squaredNorm();
  }
  if (denom == 0.0)
    throw DataError("relative_test_error: all-zero truth set");
  return std::sqrt(num / denom);
}

double fitted_loglog_slope(const std::vector<double>& x,
                           const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ParamError("fitted_loglog_slope: needs at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (sxy - sx * sy / n) / (sxx - sx * sx / n);
}

namespace {

struct TrialOutcome {
  double error = 0.0;
  double seconds = 0.0;
};

TrialOutcome run_advection_trial(const DecayConfig& cfg, Index N,
                                 std::uint64_t data_seed,
                                 std::uint64_t ensemble_seed) {
  const OperatorDataset train =
      gen_advection1(cfg.train_count, cfg.resolution, data_seed);
  const OperatorDataset test = gen_advection1(cfg.test_count, cfg.resolution,
                                              derive_seed(data_seed, 1));
  TrainConfig tc;
  tc.distribution = cfg.distribution;
  tc.gamma = cfg.gamma;
  tc.feature_count = N;
  tc.seed = ensemble_seed;
  const double t0 = now_seconds();
  const OperatorModel model = train_operator(train, tc);
  const double t1 = now_seconds();
  const Mat preds = predict_samples_batch(model, test.inputs);
  return {relative_test_error(preds, test.outputs), t1 - t0};
}

TrialOutcome run_rkhs_trial(const DecayConfig& cfg, Index N,
                            std::uint64_t data_seed,
                            std::uint64_t ensemble_seed) {
  const RkhsRegressionTask task = gen_rkhs_regression(
      cfg.sample_count, cfg.kernel_gamma, cfg.center_count, data_seed);
  RecoveryConfig rc;
  rc.distribution = FeatureDistribution::Cauchy;
  rc.gamma = cfg.kernel_gamma;
  rc.feature_count = N;
  rc.seed = ensemble_seed;
  const double t0 = now_seconds();
  const RandomFeatureInterpolant fit = recover(task.grid, task.values, rc);
  const double t1 = now_seconds();

  const Index fine = 2000;
  Mat fine_points(fine, 1);
  Vec truth(fine);
  for (Index j = 0; j < fine; ++j) {
    const double x =
        static_cast<double>(j) / static_cast<double>(fine - 1);
    fine_points(j, 0) = x;
    truth[j] = task.target(x);
  }
  const Vec approx = evaluate_points(fit, fine_points);
  return {std::sqrt((approx - truth).squaredNorm() / truth.squaredNorm()),
          t1 - t0};
}

TrialOutcome run_representable_trial(const DecayConfig& cfg, Index N,
                                     std::uint64_t data_seed,
                                     std::uint64_t ensemble_seed) {
  const GridPtr grid = equispaced_grid(cfg.sample_count, 0.0, 1.0);
  // target spanned by the first feature of the (prefix-nested) ensemble
  const FeatureEnsemble probe =
      sample_ensemble(cfg.distribution, 1, 1, cfg.kernel_gamma, ensemble_seed);
  const double omega = probe.frequencies(0, 0);
  const Vec values =
      (grid->points.col(0).array() * omega).cos().matrix();
  RecoveryConfig rc;
  rc.distribution = cfg.distribution;
  rc.gamma = cfg.kernel_gamma;
  rc.feature_count = N;
  rc.seed = ensemble_seed;
  const double t0 = now_seconds();
  const RandomFeatureInterpolant fit = recover(grid, values, rc);
  const double t1 = now_seconds();
  const Vec at_grid = evaluate_points(fit, grid->points);
  const double residual = (at_grid - values).cwiseAbs().maxCoeff() /
                          std::max(1.0, values.cwiseAbs().maxCoeff());
  return {residual, t1 - t0};
}

}  // namespace

DecayResult decay_study(const DecayConfig& cfg) {
  if (cfg.feature_counts.size() < 4)
    throw ParamError("decay_study: needs at least 4 feature counts");
  if (!std::is_sorted(cfg.feature_counts.begin(), cfg.feature_counts.end()))
    throw ParamError("decay_study: feature counts must be increasing");
  if (cfg.trials < 1) throw ParamError("decay_study: trials must be >= 1");

  DecayResult result;
  std::vector<double> ns, errs, times;
  for (size_t i = 0; i < cfg.feature_counts.size(); ++i) {
    const Index N = cfg.feature_counts[i];
    std::vector<double> trial_errors(cfg.trials), trial_seconds(cfg.trials);
    for (int t = 0; t < cfg.trials; ++t) {
      const std::uint64_t data_seed =
          derive_seed(cfg.seed, 1000 + static_cast<std::uint64_t>(t));
      const std::uint64_t ensemble_seed =
          derive_seed(cfg.seed, 2000 + static_cast<std::uint64_t>(t));
      TrialOutcome out;
      switch (cfg.task) {
        case DecayTask::Advection1:
          out = run_advection_trial(cfg, N, data_seed, ensemble_seed);
          break;
        case DecayTask::RkhsRegression:
          out = run_rkhs_trial(cfg, N, data_seed, ensemble_seed);
          break;
        case DecayTask::Representable:
          out = run_representable_trial(cfg, N, data_seed, ensemble_seed);
          break;
      }
      trial_errors[t] = out.error;
      trial_seconds[t] = out.seconds;
    }
    DecayRow row;
    row.feature_count = N;
    row.median_error = median_of(trial_errors);
    row.median_seconds = median_of(trial_seconds);
    result.rows.push_back(row);
    ns.push_back(static_cast<double>(N));
    errs.push_back(std::max(row.median_error, 1e-300));
    times.push_back(std::max(row.median_seconds, 1e-9));
  }
  result.error_slope = fitted_loglog_slope(ns, errs);
  result.time_slope = fitted_loglog_slope(ns, times);
  return result;
}

}  // namespace rfol
