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

#include "rfol/types.hpp"

#include <limits>

namespace rfol {

const char* to_string(FeatureDistribution d) {
  switch (d) {
    case FeatureDistribution::Cauchy:
      return "cauchy";
    case FeatureDistribution::Gaussian:
      return "gaussian";
  }
  return "?";
}

FeatureDistribution feature_distribution_from_string(const std::string& name) {
  if (name == "cauchy") return FeatureDistribution::Cauchy;
  if (name == "gaussian") return FeatureDistribution::Gaussian;
  throw ParamError("unknown feature distribution '" + name +
                   "' (expected cauchy or gaussian)");
}

const char* to_string(KernelKind k) {
  switch (k) {
    case KernelKind::Rbf:
      return "rbf";
    case KernelKind::Matern:
      return "matern";
    case KernelKind::Laplace:
      return "laplace";
  }
  return "?";
}

KernelKind kernel_kind_from_string(const std::string& name) {
  if (name == "rbf") return KernelKind::Rbf;
  if (name == "matern") return KernelKind::Matern;
  if (name == "laplace") return KernelKind::Laplace;
  throw ParamError("unknown kernel kind '" + name +
                   "' (expected rbf, matern or laplace)");
}

GridPtr make_grid(Mat points, Vec lo, Vec hi) {
  const Index m = points.rows();
  const Index d = points.cols();
  if (m < 1 || d < 1) throw DataError("grid: needs at least one point");
  if (lo.size() != d || hi.size() != d)
    throw DataError("grid: bounds dimension does not match point dimension");
  if (!points.allFinite() || !lo.allFinite() || !hi.allFinite())
    throw DataError("grid: non-finite coordinates");
  for (Index i = 0; i < d; ++i) {
    if (hi[i] < lo[i]) throw DataError("grid: hi < lo on axis " +
                                       std::to_string(i));
  }
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < d; ++i) {
      const double x = points(j, i);
      if (x < lo[i] || x > hi[i]) {
        std::ostringstream msg;
        msg << "grid: point " << j << " leaves the domain on axis " << i
            << " (" << x << " outside [" << lo[i] << ", " << hi[i] << "])";
        throw DataError(msg.str());
      }
    }
  }
  auto grid = std::make_shared<CollocationGrid>(
      CollocationGrid{std::move(points), std::move(lo), std::move(hi)});
  if (grid->count() > 1 && min_separation(*grid) <= 0.0)
    throw DataError("grid: points are not pairwise distinct");
  if (!std::isfinite(grid->volume()))
    throw DataError("grid: volume is not finite");
  return grid;
}

GridPtr equispaced_grid(Index count, double lo, double hi) {
  if (count < 1) throw ParamError("equispaced_grid: count must be positive");
  Mat points(count, 1);
  if (count == 1) {
    points(0, 0) = lo;
  } else {
    for (Index j = 0; j < count; ++j)
      points(j, 0) = lo + (hi - lo) * static_cast<double>(j) /
                              static_cast<double>(count - 1);
  }
  return make_grid(std::move(points), Vec::Constant(1, lo),
                   Vec::Constant(1, hi));
}

GridPtr periodic_grid(Index count, double lo, double hi) {
  if (count < 1) throw ParamError("periodic_grid: count must be positive");
  Mat points(count, 1);
  const double h = (hi - lo) / static_cast<double>(count);
  for (Index j = 0; j < count; ++j)
    points(j, 0) = lo + (static_cast<double>(j) + 0.5) * h;
  return make_grid(std::move(points), Vec::Constant(1, lo),
                   Vec::Constant(1, hi));
}

double min_separation(const CollocationGrid& grid) {
  const Index m = grid.count();
  if (m < 2)
    throw ParamError("min_separation: needs at least two points, got " +
                     std::to_string(m));
  double best = std::numeric_limits<double>::infinity();
  for (Index j = 1; j < m; ++j) {
    for (Index i = 0; i < j; ++i) {
      const double d2 = (grid.points.row(j) - grid.points.row(i)).squaredNorm();
      if (d2 < best) best = d2;
    }
  }
  return std::sqrt(best);
}

FieldSample make_field(GridPtr grid, Vec values) {
  if (!grid) throw ParamError("field: null grid");
  if (values.size() != grid->count())
    throw DataError("field: " + std::to_string(values.size()) +
                    " values on a grid of " + std::to_string(grid->count()) +
                    " points");
  if (!values.allFinite()) throw DataError("field: non-finite values");
  return FieldSample{std::move(grid), std::move(values)};
}

OperatorDataset make_dataset(GridPtr input_grid, GridPtr output_grid,
                             Mat inputs, Mat outputs) {
  if (!input_grid || !output_grid) throw ParamError("dataset: null grid");
  if (inputs.rows() != outputs.rows())
    throw DataError("dataset: " + std::to_string(inputs.rows()) +
                    " inputs vs " + std::to_string(outputs.rows()) +
                    " outputs");
  if (inputs.rows() < 1) throw DataError("dataset: empty");
  if (inputs.cols() != input_grid->count())
    throw DataError("dataset: input length " + std::to_string(inputs.cols()) +
                    " does not match the input grid (" +
                    std::to_string(input_grid->count()) + " points)");
  if (outputs.cols() != output_grid->count())
    throw DataError("dataset: output length " +
                    std::to_string(outputs.cols()) +
                    " does not match the output grid (" +
                    std::to_string(output_grid->count()) + " points)");
  if (!inputs.allFinite() || !outputs.allFinite())
    throw DataError("dataset: non-finite sample values");
  return OperatorDataset{std::move(input_grid), std::move(output_grid),
                         std::move(inputs), std::move(outputs)};
}

}  // namespace rfol
