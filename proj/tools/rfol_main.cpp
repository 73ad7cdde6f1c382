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

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "rfol/datagen.hpp"
#include "rfol/diagnostics.hpp"
#include "rfol/features.hpp"
#include "rfol/io.hpp"
#include "rfol/kernels.hpp"
#include "rfol/operator.hpp"
#include "rfol/parallel.hpp"
#include "rfol/rng.hpp"
#include "rfol/solver.hpp"

namespace {

using namespace rfol;
using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
  return std::chrono::duration<double>(clock_type::now() - start).count();
}

// exit codes: 0 ok, 2 parameter, 3 data, 4 numerical
constexpr int kExitParam = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

void check_grids_match(const GridPtr& a, const GridPtr& b, const char* what) {
  if (a->count() != b->count() || a->dim() != b->dim() ||
      (a->points - b->points).cwiseAbs().maxCoeff() > 1e-12)
    throw DataError(std::string("mismatched ") + what +
                    " grids between model and dataset");
}

std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  return out;
}

struct GenArgs {
  std::string problem;
  Index train = 1000;
  Index test = 200;
  Index resolution = 40;
  std::uint64_t seed = 1;
  double tau = 3.0;
  std::string out = "dataset";
};

void run_gen(const GenArgs& args) {
  auto generate = [&](Index count, std::uint64_t seed) -> OperatorDataset {
    if (args.problem == "advection1")
      return gen_advection1(count, args.resolution, seed);
    if (args.problem == "advection2")
      return gen_advection2(count, args.resolution, seed);
    if (args.problem == "advection3")
      return gen_advection3(count, args.resolution, seed, args.tau);
    throw ParamError("unknown problem '" + args.problem +
                     "' (expected advection1, advection2 or advection3)");
  };
  const std::string train_path = args.out + ".train.rfol";
  const std::string test_path = args.out + ".test.rfol";
  write_dataset(train_path, generate(args.train, args.seed));
  write_dataset(test_path, generate(args.test, derive_seed(args.seed, 999)));
  std::cout << args.problem << ": " << args.train << " train + " << args.test
            << " test samples at resolution " << args.resolution << " (seed "
            << args.seed << ") -> " << train_path << ", " << test_path
            << "\n";
}

struct TrainArgs {
  std::string data;
  std::string dist = "cauchy";
  double gamma = 1.0;
  Index features = 0;
  std::uint64_t seed = 0;
  std::string out = "model.rfol";
  std::string recovery_dist;
  double recovery_gamma = 0.0;
  Index recovery_features = 0;
  std::uint64_t recovery_seed = 0;
};

void run_train(const TrainArgs& args) {
  const OperatorDataset data = read_dataset(args.data);
  TrainConfig cfg;
  cfg.distribution = feature_distribution_from_string(args.dist);
  cfg.gamma = args.gamma;
  cfg.feature_count = args.features;
  cfg.seed = args.seed;
  if (args.recovery_features > 0) {
    cfg.recovery.distribution = feature_distribution_from_string(
        args.recovery_dist.empty() ? args.dist : args.recovery_dist);
    cfg.recovery.gamma = args.recovery_gamma;  // 0 derives the default
    cfg.recovery.feature_count = args.recovery_features;
    cfg.recovery.seed = args.recovery_seed;
  }
  const auto start = clock_type::now();
  const OperatorModel model = train_operator(data, cfg);
  const double elapsed = seconds_since(start);
  write_model(args.out, model);
  std::cout << "trained " << to_string(cfg.distribution)
            << " N=" << cfg.feature_count << " gamma=" << cfg.gamma << " on "
            << data.sample_count() << " samples in " << elapsed
            << " seconds -> " << args.out << "\n";
}

struct EvalArgs {
  std::string model;
  std::string data;
  std::string csv;
};

void run_eval(const EvalArgs& args) {
  const OperatorModel model = read_model(args.model);
  const OperatorDataset data = read_dataset(args.data);
  check_grids_match(model.input_grid, data.input_grid, "input");
  check_grids_match(model.output_grid, data.output_grid, "output");
  const Mat preds = predict_samples_batch(model, data.inputs);
  const double err = relative_test_error(preds, data.outputs);
  std::cout << "relative test error: " << err << "\n";
  if (!args.csv.empty()) {
    auto out = open_csv(args.csv);
    out << "model,data,samples,relative_test_error\n";
    out << args.model << "," << args.data << "," << data.sample_count() << ","
        << err << "\n";
  }
}

struct CompareArgs {
  std::string train;
  std::string test;
  std::string dist = "cauchy";
  double gamma = 1e-5;
  Index features = 0;
  std::uint64_t seed = 0;
  double rbf_gamma = 0.5;
  double matern_sigma = 1.0;
  double matern_nu = 1.5;
  bool skip_matern = false;
  std::string csv;
};

void run_compare(const CompareArgs& args, std::ostream& console) {
  const OperatorDataset train = read_dataset(args.train);
  const OperatorDataset test = read_dataset(args.test);

  struct Row {
    std::string model;
    std::string params;
    double seconds;
    double error;
  };
  std::vector<Row> rows;

  {
    TrainConfig cfg;
    cfg.distribution = feature_distribution_from_string(args.dist);
    cfg.gamma = args.gamma;
    cfg.feature_count = args.features;
    cfg.seed = args.seed;
    const auto start = clock_type::now();
    const OperatorModel model = train_operator(train, cfg);
    const double elapsed = seconds_since(start);
    const double err = relative_test_error(
        predict_samples_batch(model, test.inputs), test.outputs);
    rows.push_back({std::string("rf_") + to_string(cfg.distribution),
                    "N=" + std::to_string(args.features) +
                        ";gamma=" + std::to_string(args.gamma),
                    elapsed, err});
  }
  {
    KernelSpec spec{KernelKind::Rbf, args.rbf_gamma, 1.0, 1.5};
    const auto start = clock_type::now();
    const KernelOperatorModel model = train_kernel_operator(train, spec);
    const double elapsed = seconds_since(start);
    const double err = relative_test_error(
        predict_samples_batch(model, test.inputs), test.outputs);
    rows.push_back({"kernel_rbf", "gamma=" + std::to_string(args.rbf_gamma),
                    elapsed, err});
  }
  if (!args.skip_matern) {
    KernelSpec spec{KernelKind::Matern, 1.0, args.matern_sigma,
                    args.matern_nu};
    const auto start = clock_type::now();
    const KernelOperatorModel model = train_kernel_operator(train, spec);
    const double elapsed = seconds_since(start);
    const double err = relative_test_error(
        predict_samples_batch(model, test.inputs), test.outputs);
    rows.push_back({"kernel_matern",
                    "sigma=" + std::to_string(args.matern_sigma) +
                        ";nu=" + std::to_string(args.matern_nu),
                    elapsed, err});
  }

  console << "model,params,train_seconds,relative_test_error\n";
  for (const Row& r : rows)
    console << r.model << "," << r.params << "," << r.seconds << ","
            << r.error << "\n";
  if (!args.csv.empty()) {
    auto out = open_csv(args.csv);
    out << "model,params,train_seconds,relative_test_error\n";
    for (const Row& r : rows)
      out << r.model << "," << r.params << "," << r.seconds << "," << r.error
          << "\n";
  }
}

struct ConcentrationArgs {
  Index m = 50;
  double eta = 0.25;
  double delta = 0.05;
  int trials = 100;
  std::uint64_t seed = 7;
  std::string dist = "cauchy";
  Index features = 0;  // 0: from the sample-complexity formula
  double gamma = 0.0;  // 0: from the separation formula
  std::string csv;
};

void run_concentration(const ConcentrationArgs& args) {
  const GridPtr grid = equispaced_grid(args.m, 0.0, 1.0);
  const double m = static_cast<double>(args.m);
  const Index N =
      args.features > 0
          ? args.features
          : static_cast<Index>(std::ceil(6.0 / (args.eta * args.eta) * m *
                                         std::log(m / (2.0 * args.delta))));
  const double K = min_separation(*grid);
  const double gamma =
      args.gamma > 0 ? args.gamma : std::log(m / args.eta) / K;
  const ConcentrationResult result = concentration_check(
      *grid, feature_distribution_from_string(args.dist), gamma, N,
      args.trials, args.seed);
  int within = 0;
  for (double dev : result.deviations)
    if (dev <= 2.0 * args.eta) ++within;
  std::cout << "m=" << args.m << " N=" << N << " gamma=" << gamma
            << " separation=" << K << "\n";
  std::cout << "deviation p95=" << result.deviation_p95
            << " bound 2*eta=" << 2.0 * args.eta << "; " << within << "/"
            << args.trials << " trials within the bound\n";
  if (!args.csv.empty()) {
    auto out = open_csv(args.csv);
    out << "trial,deviation\n";
    for (size_t t = 0; t < result.deviations.size(); ++t)
      out << t << "," << result.deviations[t] << "\n";
  }
}

struct DecayArgs {
  std::string task = "advection1";
  std::string feature_counts = "250,500,1000,2000,4000";
  int trials = 10;
  std::uint64_t seed = 11;
  Index train = 200;
  Index test = 100;
  Index resolution = 40;
  double gamma = 1e-3;
  std::string dist = "gaussian";
  Index samples = 50;
  double kernel_gamma = 4.0;
  Index centers = 10;
  std::string csv;
};

std::vector<Index> parse_counts(const std::string& text) {
  std::vector<Index> counts;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      counts.push_back(static_cast<Index>(std::stoll(cell)));
    } catch (const std::exception&) {
      throw ParamError("cannot parse feature count '" + cell + "'");
    }
  }
  return counts;
}

void run_decay(const DecayArgs& args) {
  DecayConfig cfg;
  if (args.task == "advection1")
    cfg.task = DecayTask::Advection1;
  else if (args.task == "rkhs")
    cfg.task = DecayTask::RkhsRegression;
  else if (args.task == "representable")
    cfg.task = DecayTask::Representable;
  else
    throw ParamError("unknown decay task '" + args.task +
                     "' (expected advection1, rkhs or representable)");
  cfg.feature_counts = parse_counts(args.feature_counts);
  cfg.trials = args.trials;
  cfg.seed = args.seed;
  cfg.train_count = args.train;
  cfg.test_count = args.test;
  cfg.resolution = args.resolution;
  cfg.gamma = args.gamma;
  cfg.distribution = feature_distribution_from_string(args.dist);
  cfg.sample_count = args.samples;
  cfg.kernel_gamma = args.kernel_gamma;
  cfg.center_count = args.centers;

  const DecayResult result = decay_study(cfg);
  std::cout << "feature_count,median_error,median_train_seconds\n";
  for (const DecayRow& row : result.rows)
    std::cout << row.feature_count << "," << row.median_error << ","
              << row.median_seconds << "\n";
  std::cout << "error log-log slope: " << result.error_slope << "\n";
  std::cout << "time  log-log slope: " << result.time_slope << "\n";
  if (!args.csv.empty()) {
    auto out = open_csv(args.csv);
    out << "feature_count,median_error,median_train_seconds\n";
    for (const DecayRow& row : result.rows)
      out << row.feature_count << "," << row.median_error << ","
          << row.median_seconds << "\n";
  }
}

struct KernelLimitArgs {
  Index m = 20;
  double gamma = 1.0;
  Index features = 200000;
  int seeds = 10;
  Index test_points = 200;
  double tolerance = 0.05;
  std::uint64_t seed = 3;
  std::string csv;
};

// Laplace-kernel interpolation against the Cauchy random-feature interpolant
// fit through the same values; reports the sup-norm disagreement per seed.
void run_kernel_limit(const KernelLimitArgs& args, std::ostream& console) {
  std::vector<double> sups;
  for (int t = 0; t < args.seeds; ++t) {
    SeededRng rng(derive_seed(args.seed, static_cast<std::uint64_t>(t)));
    Mat points(args.m, 1);
    for (Index j = 0; j < args.m; ++j) points(j, 0) = rng.uniform01();
    Vec values(args.m);
    for (Index j = 0; j < args.m; ++j) {
      const double x = points(j, 0);
      values[j] = std::sin(6.283185307179586 * x) + 0.5 * std::cos(5.0 * x);
    }
    const GridPtr grid =
        make_grid(points, Vec::Constant(1, 0.0), Vec::Constant(1, 1.0));

    RecoveryConfig rc{FeatureDistribution::Cauchy, args.gamma, args.features,
                      derive_seed(args.seed, 1000 + t)};
    const RandomFeatureInterpolant rf = recover(grid, values, rc);

    const KernelSpec spec{KernelKind::Laplace, args.gamma, 1.0, 1.5};
    const auto fits = kernel_fit(spec, grid->points, values);

    double sup = 0.0;
    for (Index i = 0; i < args.test_points; ++i) {
      const double x = (static_cast<double>(i) + 0.5) /
                       static_cast<double>(args.test_points);
      const Vec xv = Vec::Constant(1, x);
      const double diff =
          std::abs(evaluate(rf, xv) - kernel_predict(fits[0], xv));
      sup = std::max(sup, diff);
    }
    sups.push_back(sup);
  }
  int within = 0;
  for (double s : sups)
    if (s <= args.tolerance) ++within;
  console << "seed,sup_difference\n";
  for (size_t t = 0; t < sups.size(); ++t)
    console << t << "," << sups[t] << "\n";
  console << within << "/" << args.seeds << " seeds within " << args.tolerance
          << " sup-norm\n";
  if (!args.csv.empty()) {
    auto out = open_csv(args.csv);
    out << "seed,sup_difference\n";
    for (size_t t = 0; t < sups.size(); ++t)
      out << t << "," << sups[t] << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random feature operator learning toolkit"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "worker thread cap")
      ->envname("RFOL_THREADS");

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "generate a benchmark dataset");
  gen->add_option("problem", gen_args.problem,
                  "advection1 | advection2 | advection3")
      ->required();
  gen->add_option("--train", gen_args.train, "training sample count");
  gen->add_option("--test", gen_args.test, "test sample count");
  gen->add_option("--resolution", gen_args.resolution, "grid resolution");
  gen->add_option("--seed", gen_args.seed, "generator seed");
  gen->add_option("--tau", gen_args.tau,
                  "advection3 GP inverse length scale (default 3)");
  gen->add_option("--out", gen_args.out,
                  "output prefix; writes <out>.train.rfol / <out>.test.rfol");

  TrainArgs train_args;
  CLI::App* train =
      app.add_subcommand("train", "train a random feature operator model");
  train->add_option("--data", train_args.data, "training dataset file")
      ->required();
  train->add_option("--dist", train_args.dist, "cauchy | gaussian");
  train->add_option("--gamma", train_args.gamma, "feature scale")->required();
  train->add_option("--N", train_args.features, "feature count")->required();
  train->add_option("--seed", train_args.seed, "feature seed");
  train->add_option("--out", train_args.out, "model output file");
  train->add_option("--recovery-dist", train_args.recovery_dist,
                    "recovery-map distribution (default: same as --dist)");
  train->add_option("--recovery-gamma", train_args.recovery_gamma,
                    "recovery-map feature scale");
  train->add_option("--recovery-N", train_args.recovery_features,
                    "recovery-map feature count (default: derived)");
  train->add_option("--recovery-seed", train_args.recovery_seed,
                    "recovery-map seed (default: derived)");

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand(
      "eval", "relative test error of a model on a dataset");
  eval->add_option("--model", eval_args.model, "model file")->required();
  eval->add_option("--data", eval_args.data, "dataset file")->required();
  eval->add_option("--csv", eval_args.csv,
                   "also write a CSV row "
                   "(model,data,samples,relative_test_error)");

  CompareArgs cmp_args;
  CLI::App* cmp = app.add_subcommand(
      "compare-kernel",
      "fit RF and kernel baselines on one task; CSV row per model");
  cmp->add_option("--train", cmp_args.train, "training dataset")->required();
  cmp->add_option("--test", cmp_args.test, "test dataset")->required();
  cmp->add_option("--dist", cmp_args.dist, "RF distribution");
  cmp->add_option("--gamma", cmp_args.gamma, "RF feature scale");
  cmp->add_option("--N", cmp_args.features, "RF feature count")->required();
  cmp->add_option("--seed", cmp_args.seed, "RF feature seed");
  cmp->add_option("--rbf-gamma", cmp_args.rbf_gamma, "RBF kernel gamma");
  cmp->add_option("--matern-sigma", cmp_args.matern_sigma, "Matern sigma");
  cmp->add_option("--matern-nu", cmp_args.matern_nu, "Matern nu");
  cmp->add_flag("--skip-matern", cmp_args.skip_matern,
                "fit only the RBF baseline");
  cmp->add_option("--csv", cmp_args.csv,
                  "CSV output path "
                  "(model,params,train_seconds,relative_test_error)");

  CLI::App* verify = app.add_subcommand(
      "verify",
      "empirical checks of the concentration / decay / kernel-limit claims");
  verify->require_subcommand(1);

  ConcentrationArgs conc_args;
  CLI::App* conc = verify->add_subcommand(
      "concentration", "spectral deviation of (1/N) A A* from the identity");
  conc->add_option("--m", conc_args.m, "grid point count");
  conc->add_option("--eta", conc_args.eta, "target eta");
  conc->add_option("--delta", conc_args.delta, "failure probability");
  conc->add_option("--trials", conc_args.trials, "trial count");
  conc->add_option("--seed", conc_args.seed, "base seed");
  conc->add_option("--dist", conc_args.dist, "cauchy | gaussian");
  conc->add_option("--N", conc_args.features,
                   "feature count (default: sample-complexity formula)");
  conc->add_option("--gamma", conc_args.gamma,
                   "feature scale (default: separation formula)");
  conc->add_option("--csv", conc_args.csv,
                   "CSV output path (trial,deviation)");

  DecayArgs decay_args;
  CLI::App* decay = verify->add_subcommand(
      "decay", "median error and train time against the feature count");
  decay->add_option("--task", decay_args.task,
                    "advection1 | rkhs | representable");
  decay->add_option("--N-list", decay_args.feature_counts,
                    "comma-separated feature counts");
  decay->add_option("--trials", decay_args.trials, "trials per count");
  decay->add_option("--seed", decay_args.seed, "base seed");
  decay->add_option("--train", decay_args.train, "training samples");
  decay->add_option("--test", decay_args.test, "test samples");
  decay->add_option("--resolution", decay_args.resolution, "grid resolution");
  decay->add_option("--gamma", decay_args.gamma, "feature scale");
  decay->add_option("--dist", decay_args.dist, "cauchy | gaussian");
  decay->add_option("--samples", decay_args.samples,
                    "regression sample count (rkhs/representable)");
  decay->add_option("--kernel-gamma", decay_args.kernel_gamma,
                    "regression kernel gamma");
  decay->add_option("--centers", decay_args.centers,
                    "regression target expansion size");
  decay->add_option("--csv", decay_args.csv,
                    "CSV output path "
                    "(feature_count,median_error,median_train_seconds)");

  KernelLimitArgs kl_args;
  CLI::App* kl = verify->add_subcommand(
      "kernel-limit",
      "Cauchy RF interpolation against Laplace kernel interpolation");
  kl->add_option("--m", kl_args.m, "interpolation point count");
  kl->add_option("--gamma", kl_args.gamma, "shared scale");
  kl->add_option("--N", kl_args.features, "RF feature count");
  kl->add_option("--seeds", kl_args.seeds, "number of seeded repetitions");
  kl->add_option("--test-points", kl_args.test_points, "comparison grid size");
  kl->add_option("--tolerance", kl_args.tolerance, "sup-norm tolerance");
  kl->add_option("--seed", kl_args.seed, "base seed");
  kl->add_option("--csv", kl_args.csv,
                 "CSV output path (seed,sup_difference)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParam;
  }

  try {
    if (threads > 0) set_max_threads(threads);
    if (*gen) run_gen(gen_args);
    if (*train) run_train(train_args);
    if (*eval) run_eval(eval_args);
    if (*cmp) run_compare(cmp_args, std::cout);
    if (*verify) {
      if (*conc) run_concentration(conc_args);
      if (*decay) run_decay(decay_args);
      if (*kl) run_kernel_limit(kl_args, std::cout);
    }
  } catch (const ParamError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return kExitParam;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const NumericError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
