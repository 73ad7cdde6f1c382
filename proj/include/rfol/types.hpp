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

#ifndef RFOL_TYPES_HPP_
#define RFOL_TYPES_HPP_

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>

namespace rfol {

using Scalar = double;
using Complex = std::complex<double>;
using Index = Eigen::Index;

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// Error taxonomy mirrored by the CLI exit codes: 2 / 3 / 4.
struct ParamError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class FeatureDistribution { Cauchy, Gaussian };

const char* to_string(FeatureDistribution d);
FeatureDistribution feature_distribution_from_string(const std::string& name);

/// Fixed evaluation points with their axis-aligned domain.
///
/// Grids are ordered lists, not sets: every value vector in the library is
/// indexed against grid order. Points must be pairwise distinct and lie
/// inside [lo, hi] componentwise.
struct CollocationGrid {
  Mat points;  // one row per collocation point
  Vec lo;
  Vec hi;

  Index dim() const { return points.cols(); }
  Index count() const { return points.rows(); }
  double volume() const { return (hi - lo).prod(); }
};

using GridPtr = std::shared_ptr<const CollocationGrid>;

/// Validates the grid invariants and freezes the grid behind a const pointer.
GridPtr make_grid(Mat points, Vec lo, Vec hi);

/// `count` equispaced points on [lo, hi], both endpoints included.
GridPtr equispaced_grid(Index count, double lo, double hi);

/// `count` cell midpoints (j + 1/2) * h on (lo, hi); the convention for the
/// periodic benchmark grids, spacing h = (hi - lo) / count.
GridPtr periodic_grid(Index count, double lo = 0.0, double hi = 1.0);

/// Smallest pairwise Euclidean distance between grid points (the separation
/// constant K). Requires at least two points.
double min_separation(const CollocationGrid& grid);

/// Values of a real field at the points of one grid.
struct FieldSample {
  GridPtr grid;
  Vec values;
};

FieldSample make_field(GridPtr grid, Vec values);

/// Applies a pointwise field to every grid point. Non-finite outputs are
/// rejected with the offending point in the message.
template <class F>
FieldSample sampling_apply(const GridPtr& grid, F&& fn) {
  if (!grid) throw ParamError("sampling_apply: null grid");
  Vec values(grid->count());
  for (Index j = 0; j < grid->count(); ++j) {
    const Vec x = grid->points.row(j).transpose();
    const double v = fn(x);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "sampling_apply: field is not finite at point " << j << " (";
      for (Index i = 0; i < x.size(); ++i) msg << (i ? ", " : "") << x[i];
      msg << ")";
      throw DataError(msg.str());
    }
    values[j] = v;
  }
  return FieldSample{grid, std::move(values)};
}

/// Aligned training pairs: row l of `inputs` holds u_l sampled on the input
/// grid, row l of `outputs` holds v_l on the output grid.
struct OperatorDataset {
  GridPtr input_grid;
  GridPtr output_grid;
  Mat inputs;   // M x n
  Mat outputs;  // M x m

  Index sample_count() const { return inputs.rows(); }
};

OperatorDataset make_dataset(GridPtr input_grid, GridPtr output_grid,
                             Mat inputs, Mat outputs);

/// Sampled frequency vectors together with the provenance needed to
/// regenerate them bit-for-bit.
struct FeatureEnsemble {
  Mat frequencies;  // count x dim, row k = omega_k
  FeatureDistribution distribution = FeatureDistribution::Cauchy;
  double gamma = 1.0;
  std::uint64_t seed = 0;

  Index dim() const { return frequencies.cols(); }
  Index count() const { return frequencies.rows(); }
};

/// Trained model f(x) = Re( sum_k c_k exp(i <omega_k, x>) ).
struct RandomFeatureInterpolant {
  FeatureEnsemble ensemble;
  CVec coefficients;
  GridPtr train_grid;  // provenance only
};

/// How to build the output-side recovery map of a trained operator model.
/// Zero gamma / feature_count mean "derive at training time": the derived
/// scale resolves a few grid cells (gamma ~ m/8) and the derived count keeps
/// the recovery feature matrix numerically full rank (N ~ 32 m).
struct RecoveryConfig {
  FeatureDistribution distribution = FeatureDistribution::Cauchy;
  double gamma = 0.0;
  Index feature_count = 0;
  std::uint64_t seed = 0;
};

/// Composed estimator G_hat = R_v o f_hat o S_u. Column j of `coefficients`
/// holds the feature coefficients of the j-th output component.
struct OperatorModel {
  FeatureEnsemble input_ensemble;  // frequencies over R^n
  CMat coefficients;               // N x m
  GridPtr input_grid;
  GridPtr output_grid;
  RecoveryConfig recovery;
};

enum class KernelKind { Rbf, Matern, Laplace };

const char* to_string(KernelKind k);
KernelKind kernel_kind_from_string(const std::string& name);

struct KernelSpec {
  KernelKind kind = KernelKind::Rbf;
  double gamma = 1.0;  // rbf / laplace scale
  double sigma = 1.0;  // matern length scale
  double nu = 1.5;     // matern smoothness
};

/// Throws ParamError when the parameters required by `kind` are missing or
/// not positive.
void validate(const KernelSpec& spec);

}  // namespace rfol

#endif  // RFOL_TYPES_HPP_
