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

#include "rfol/kernels.hpp"

#include <algorithm>
#include <numeric>

#include "rfol/parallel.hpp"
#include "rfol/solver.hpp"

namespace rfol {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEulerGamma = 0.57721566490153286;

// Gamma-ratio helpers of the Temme series:
//   gam1 = [1/Gamma(1-mu) - 1/Gamma(1+mu)] / (2 mu)
//   gam2 = [1/Gamma(1-mu) + 1/Gamma(1+mu)] / 2
// with the mu -> 0 limit gam1 -> -euler_gamma.
void gamma_ratios(double mu, double& gam1, double& gam2, double& inv_gamma_pl,
                  double& inv_gamma_mi) {
  inv_gamma_pl = 1.0 / std::tgamma(1.0 + mu);
  inv_gamma_mi = 1.0 / std::tgamma(1.0 - mu);
  gam2 = 0.5 * (inv_gamma_mi + inv_gamma_pl);
  if (std::abs(mu) < 1e-4) {
    // cubic coefficient of 1/Gamma(1+z)
    constexpr double a3 = -0.0420026350340952355;
    gam1 = -kEulerGamma - a3 * mu * mu;
  } else {
    gam1 = (inv_gamma_mi - inv_gamma_pl) / (2.0 * mu);
  }
}

// K_mu and K_{mu+1} for |mu| <= 1/2 and 0 < x < 2 (Temme's series).
void bessel_k_small(double x, double mu, double& k_mu, double& k_mu1) {
  constexpr int kMaxIter = 10000;
  const double eps = std::numeric_limits<double>::epsilon();
  const double x2 = 0.5 * x;
  const double mu2 = mu * mu;
  const double pimu = kPi * mu;
  const double fact = std::abs(pimu) < eps ? 1.0 : pimu / std::sin(pimu);
  double d = -std::log(x2);
  double e = mu * d;
  const double fact2 = std::abs(e) < eps ? 1.0 : std::sinh(e) / e;
  double gam1, gam2, gampl, gammi;
  gamma_ratios(mu, gam1, gam2, gampl, gammi);
  double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
  double sum = ff;
  e = std::exp(e);
  double p = 0.5 * e / gampl;
  double q = 0.5 / (e * gammi);
  double c = 1.0;
  d = x2 * x2;
  double sum1 = p;
  for (int i = 1; i <= kMaxIter; ++i) {
    ff = (i * ff + p + q) / (i * i - mu2);
    c *= d / i;
    p /= (i - mu);
    q /= (i + mu);
    const double del = c * ff;
    sum += del;
    sum1 += c * (p - i * ff);
    if (std::abs(del) < std::abs(sum) * eps) break;
  }
  k_mu = sum;
  k_mu1 = sum1 * 2.0 / x;
}

// K_mu and K_{mu+1} for |mu| <= 1/2 and x >= 2 (Steed's continued fraction).
void bessel_k_large(double x, double mu, double& k_mu, double& k_mu1) {
  constexpr int kMaxIter = 10000;
  const double eps = std::numeric_limits<double>::epsilon();
  const double a1 = 0.25 - mu * mu;
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  double a = -a1;
  double q = a1;
  double c = a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i <= kMaxIter; ++i) {
    a -= 2 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < eps) break;
  }
  h = a1 * h;
  k_mu = std::sqrt(kPi / (2.0 * x)) * std::exp(-x) / s;
  k_mu1 = k_mu * (mu + x + 0.5 - h) / x;
}

double squared_distance(const Eigen::Ref<const Vec>& x,
                        const Eigen::Ref<const Vec>& y) {
  return (x - y).squaredNorm();
}

double kernel_from_distances(const KernelSpec& spec, double dist2,
                             double dist1) {
  switch (spec.kind) {
    case KernelKind::Rbf:
      return std::exp(-spec.gamma * dist2);
    case KernelKind::Laplace:
      return std::exp(-spec.gamma * dist1);
    case KernelKind::Matern: {
      const double r = std::sqrt(dist2);
      if (r == 0.0) return 1.0;
      const double z = std::sqrt(2.0 * spec.nu) * r / spec.sigma;
      // below this the closed form equals 1 to double precision
      const double z_floor = std::pow(10.0, -7.5 / std::min(spec.nu, 1.0));
      if (z < z_floor) return 1.0;
      const double scale =
          std::pow(2.0, 1.0 - spec.nu) / std::tgamma(spec.nu);
      return scale * std::pow(z, spec.nu) *
             modified_bessel_second_kind(spec.nu, z);
    }
  }
  throw ParamError("kernel_eval: unknown kernel kind");
}

double kernel_pair(const KernelSpec& spec, const Eigen::Ref<const Vec>& x,
                   const Eigen::Ref<const Vec>& y) {
  const double dist1 =
      spec.kind == KernelKind::Laplace ? (x - y).lpNorm<1>() : 0.0;
  return kernel_from_distances(spec, squared_distance(x, y), dist1);
}

void check_distinct_rows(const Eigen::Ref<const Mat>& X, const char* who) {
  const Index m = X.rows();
  std::vector<Index> order(m);
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    for (Index j = 0; j < X.cols(); ++j)
      if (X(a, j) != X(b, j)) return X(a, j) < X(b, j);
    return false;
  });
  for (Index i = 1; i < m; ++i) {
    if (X.row(order[i - 1]) == X.row(order[i]))
      throw DataError(std::string(who) + ": duplicate centers at rows " +
                      std::to_string(std::min(order[i - 1], order[i])) +
                      " and " +
                      std::to_string(std::max(order[i - 1], order[i])));
  }
}

// Symmetric kernel matrix of one point set: lower triangle then mirror.
Mat kernel_gram(const KernelSpec& spec, const Eigen::Ref<const Mat>& X) {
  const Index m = X.rows();
  Mat K(m, m);
  parallel_for(m, 16, [&](Index r0, Index r1) {
    for (Index i = r0; i < r1; ++i) {
      K(i, i) = 1.0;
      for (Index j = 0; j < i; ++j)
        K(i, j) = kernel_pair(spec, X.row(i).transpose(), X.row(j).transpose());
    }
  });
  K.triangularView<Eigen::StrictlyUpper>() = K.transpose();
  return K;
}

}  // namespace

double modified_bessel_second_kind(double nu, double x) {
  if (!(x > 0.0))
    throw ParamError("modified_bessel_second_kind: requires x > 0, got " +
                     std::to_string(x));
  nu = std::abs(nu);  // K_{-nu} = K_nu
  const int steps = static_cast<int>(nu + 0.5);
  const double mu = nu - steps;  // in [-1/2, 1/2]

  double k_mu, k_mu1;
  if (x < 2.0)
    bessel_k_small(x, mu, k_mu, k_mu1);
  else
    bessel_k_large(x, mu, k_mu, k_mu1);

  // upward recurrence K_{o+1} = K_{o-1} + 2 o / x * K_o
  for (int i = 1; i <= steps; ++i) {
    const double next = k_mu + 2.0 * (mu + i) / x * k_mu1;
    k_mu = k_mu1;
    k_mu1 = next;
  }
  return k_mu;
}

void validate(const KernelSpec& spec) {
  switch (spec.kind) {
    case KernelKind::Rbf:
    case KernelKind::Laplace:
      if (!(spec.gamma > 0.0) || !std::isfinite(spec.gamma))
        throw ParamError("kernel: gamma must be positive");
      return;
    case KernelKind::Matern:
      if (!(spec.sigma > 0.0) || !std::isfinite(spec.sigma))
        throw ParamError("kernel: matern sigma must be positive");
      if (!(spec.nu > 0.0) || spec.nu > 100.0)
        throw ParamError(
            "kernel: matern nu must lie in (0, 100] (double-precision "
            "gamma-function limit)");
      return;
  }
  throw ParamError("kernel: unknown kind");
}

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Vec>& x,
                   const Eigen::Ref<const Vec>& y) {
  validate(spec);
  if (x.size() != y.size())
    throw ParamError("kernel_eval: dimension mismatch " +
                     std::to_string(x.size()) + " vs " +
                     std::to_string(y.size()));
  return kernel_pair(spec, x, y);
}

Mat kernel_matrix(const KernelSpec& spec, const Eigen::Ref<const Mat>& X,
                  const Eigen::Ref<const Mat>& Y) {
  validate(spec);
  if (X.cols() != Y.cols())
    throw ParamError("kernel_matrix: dimension mismatch " +
                     std::to_string(X.cols()) + " vs " +
                     std::to_string(Y.cols()));
  Mat K(X.rows(), Y.rows());
  parallel_for(X.rows(), 16, [&](Index r0, Index r1) {
    for (Index i = r0; i < r1; ++i)
      for (Index j = 0; j < Y.rows(); ++j)
        K(i, j) =
            kernel_pair(spec, X.row(i).transpose(), Y.row(j).transpose());
  });
  return K;
}

std::vector<KernelInterpolant> kernel_fit(const KernelSpec& spec,
                                          const Eigen::Ref<const Mat>& X,
                                          const Eigen::Ref<const Mat>& Y) {
  validate(spec);
  if (X.rows() != Y.rows())
    throw ParamError("kernel_fit: " + std::to_string(X.rows()) +
                     " centers vs " + std::to_string(Y.rows()) +
                     " target rows");
  check_distinct_rows(X, "kernel_fit");

  const Mat K = kernel_gram(spec, X);
  auto [llt, jitter] = cholesky_with_jitter(K, 1.0);
  Mat W(X.rows(), Y.cols());
  parallel_for(Y.cols(), 8, [&](Index c0, Index c1) {
    W.middleCols(c0, c1 - c0) = llt.solve(Y.middleCols(c0, c1 - c0));
  });

  auto centers = std::make_shared<const Mat>(X);
  std::vector<KernelInterpolant> fits;
  fits.reserve(Y.cols());
  for (Index c = 0; c < Y.cols(); ++c)
    fits.push_back(KernelInterpolant{spec, centers, W.col(c), jitter});
  return fits;
}

double kernel_predict(const KernelInterpolant& interp,
                      const Eigen::Ref<const Vec>& x) {
  const Mat& centers = *interp.centers;
  if (x.size() != centers.cols())
    throw ParamError("kernel_predict: dimension mismatch " +
                     std::to_string(x.size()) + " vs " +
                     std::to_string(centers.cols()));
  double acc = 0.0;
  for (Index l = 0; l < centers.rows(); ++l)
    acc += interp.weights[l] *
           kernel_pair(interp.spec, x, centers.row(l).transpose());
  return acc;
}

KernelOperatorModel train_kernel_operator(const OperatorDataset& data,
                                          const KernelSpec& spec) {
  validate(spec);
  check_distinct_rows(data.inputs, "train_kernel_operator");
  const Mat K = kernel_gram(spec, data.inputs);
  auto [llt, jitter] = cholesky_with_jitter(K, 1.0);
  Mat W(data.sample_count(), data.outputs.cols());
  parallel_for(data.outputs.cols(), 8, [&](Index c0, Index c1) {
    W.middleCols(c0, c1 - c0) = llt.solve(data.outputs.middleCols(c0, c1 - c0));
  });
  return KernelOperatorModel{spec,
                             data.input_grid,
                             data.output_grid,
                             std::make_shared<const Mat>(data.inputs),
                             std::move(W),
                             jitter};
}

Vec predict_samples(const KernelOperatorModel& model,
                    const Eigen::Ref<const Vec>& u) {
  if (u.size() != model.centers->cols())
    throw ParamError("predict_samples: input length " +
                     std::to_string(u.size()) + " does not match " +
                     std::to_string(model.centers->cols()));
  const Mat k_row = kernel_matrix(model.spec, u.transpose(), *model.centers);
  return (k_row * model.weights).row(0).transpose();
}

Mat predict_samples_batch(const KernelOperatorModel& model,
                          const Eigen::Ref<const Mat>& U) {
  if (U.cols() != model.centers->cols())
    throw ParamError("predict_samples: input length " +
                     std::to_string(U.cols()) + " does not match " +
                     std::to_string(model.centers->cols()));
  return kernel_matrix(model.spec, U, *model.centers) * model.weights;
}

}  // namespace rfol
