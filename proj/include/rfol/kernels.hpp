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

#ifndef RFOL_KERNELS_HPP_
#define RFOL_KERNELS_HPP_

#include <memory>
#include <vector>

#include "rfol/types.hpp"

namespace rfol {

/// Modified Bessel function of the second kind K_nu(x) for arbitrary real
/// order nu and x > 0. Series for x < 2, Steed's continued fraction above,
/// upward recurrence in the order.
double modified_bessel_second_kind(double nu, double x);

/// Closed forms:
///   rbf      exp(-gamma ||x - y||_2^2)
///   laplace  exp(-gamma ||x - y||_1)
///   matern   2^(1-nu)/Gamma(nu) z^nu K_nu(z),  z = sqrt(2 nu) ||x - y||_2 / sigma
double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Vec>& x,
                   const Eigen::Ref<const Vec>& y);

/// Pairwise kernel matrix, K(i, j) = k(X.row(i), Y.row(j)).
Mat kernel_matrix(const KernelSpec& spec, const Eigen::Ref<const Mat>& X,
                  const Eigen::Ref<const Mat>& Y);

struct KernelInterpolant {
  KernelSpec spec;
  std::shared_ptr<const Mat> centers;  // shared across the fitted columns
  Vec weights;
  double jitter = 0.0;
};

/// Solves K w = y per target column via Cholesky with the jitter ladder; the
/// factorization is computed once and shared across columns. Centers must be
/// distinct.
std::vector<KernelInterpolant> kernel_fit(const KernelSpec& spec,
                                          const Eigen::Ref<const Mat>& X,
                                          const Eigen::Ref<const Mat>& Y);

/// sum_l w_l k(x, center_l).
double kernel_predict(const KernelInterpolant& interp,
                      const Eigen::Ref<const Vec>& x);

/// Kernel-interpolation baseline plugged into the operator pipeline: the
/// m-component map f_hat is fit by kernel interpolation on the M training
/// inputs, one shared factorization for all output components.
struct KernelOperatorModel {
  KernelSpec spec;
  GridPtr input_grid;
  GridPtr output_grid;
  std::shared_ptr<const Mat> centers;  // M x n training inputs
  Mat weights;                         // M x m dual coefficients
  double jitter = 0.0;
};

KernelOperatorModel train_kernel_operator(const OperatorDataset& data,
                                          const KernelSpec& spec);

Vec predict_samples(const KernelOperatorModel& model,
                    const Eigen::Ref<const Vec>& u);
Mat predict_samples_batch(const KernelOperatorModel& model,
                          const Eigen::Ref<const Mat>& U);

}  // namespace rfol

#endif  // RFOL_KERNELS_HPP_
