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

#include "rfol/io.hpp"

#include <json.hpp>

#include <bit>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace rfol {

namespace {

static_assert(std::endian::native == std::endian::little,
              "the RFOL container is little-endian");

using nlohmann::json;

constexpr char kMagic[4] = {'R', 'F', 'O', 'L'};
constexpr std::uint32_t kVersion = 1;

using RowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class Writer {
 public:
  explicit Writer(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw DataError("cannot open '" + path + "' for writing");
  }

  void header(const json& meta) {
    const std::string text = meta.dump();
    out_.write(kMagic, 4);
    const std::uint32_t version = kVersion;
    out_.write(reinterpret_cast<const char*>(&version), 4);
    const std::uint64_t len = text.size();
    out_.write(reinterpret_cast<const char*>(&len), 8);
    out_.write(text.data(), static_cast<std::streamsize>(text.size()));
  }

  // row-major float64 block
  void array(const Eigen::Ref<const Mat>& values) {
    if (!values.allFinite())
      throw DataError("write: refusing to persist non-finite values");
    const RowMat row_major = values;
    out_.write(reinterpret_cast<const char*>(row_major.data()),
               static_cast<std::streamsize>(sizeof(double) *
                                            row_major.size()));
  }

  void close() {
    out_.flush();
    if (!out_) throw DataError("write failed (disk full?)");
  }

 private:
  std::ofstream out_;
};

class Reader {
 public:
  Reader(const std::string& path, const std::string& expected_kind)
      : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw DataError("cannot open '" + path + "'");
    char magic[4] = {};
    read_raw(magic, 4, "magic");
    if (std::string(magic, 4) != std::string(kMagic, 4))
      fail("bad magic bytes (not an RFOL container)", 0);
    std::uint32_t version = 0;
    read_raw(reinterpret_cast<char*>(&version), 4, "version");
    if (version != kVersion)
      fail("unsupported format version " + std::to_string(version) +
               " (expected " + std::to_string(kVersion) + ")",
           4);
    std::uint64_t len = 0;
    read_raw(reinterpret_cast<char*>(&len), 8, "metadata length");
    std::string text(len, '\0');
    read_raw(text.data(), len, "metadata");
    try {
      meta_ = json::parse(text);
    } catch (const json::parse_error& e) {
      fail(std::string("metadata is not valid JSON: ") + e.what(), 16);
    }
    const std::string kind = meta_.value("kind", "");
    if (kind != expected_kind)
      throw DataError("'" + path + "' holds a " +
                      (kind.empty() ? "(unknown)" : kind) + ", expected a " +
                      expected_kind);
  }

  const json& meta() const { return meta_; }

  Mat array(Index rows, Index cols, const char* name) {
    if (rows < 0 || cols < 0) fail("negative array extent in metadata", 16);
    RowMat block(rows, cols);
    const std::uint64_t start = offset_;
    read_raw(reinterpret_cast<char*>(block.data()),
             sizeof(double) * static_cast<std::uint64_t>(block.size()), name);
    for (Index i = 0; i < block.size(); ++i) {
      if (!std::isfinite(block.data()[i]))
        fail(std::string("non-finite value in ") + name,
             start + 8 * static_cast<std::uint64_t>(i));
    }
    return block;
  }

  void expect_eof() {
    char extra = 0;
    in_.read(&extra, 1);
    if (in_.gcount() != 0)
      fail("trailing bytes after the final array", offset_);
  }

 private:
  void read_raw(char* dst, std::uint64_t bytes, const char* what) {
    in_.read(dst, static_cast<std::streamsize>(bytes));
    if (static_cast<std::uint64_t>(in_.gcount()) != bytes)
      fail(std::string("truncated while reading ") + what +
               " (wanted " + std::to_string(bytes) + " bytes)",
           offset_ + static_cast<std::uint64_t>(std::max<std::streamsize>(
                         in_.gcount(), 0)));
    offset_ += bytes;
  }

  [[noreturn]] void fail(const std::string& why, std::uint64_t at) const {
    throw DataError("'" + path_ + "': " + why + " (byte offset " +
                    std::to_string(at) + ")");
  }

  std::string path_;
  std::ifstream in_;
  json meta_;
  std::uint64_t offset_ = 0;
};

json grid_meta(const CollocationGrid& grid) {
  return json{{"dim", grid.dim()},
              {"count", grid.count()},
              {"lo", std::vector<double>(grid.lo.data(),
                                         grid.lo.data() + grid.lo.size())},
              {"hi", std::vector<double>(grid.hi.data(),
                                         grid.hi.data() + grid.hi.size())}};
}

GridPtr grid_from(Reader& reader, const json& meta, const char* name) {
  const Index count = meta.at("count").get<Index>();
  const Index dim = meta.at("dim").get<Index>();
  const auto lo = meta.at("lo").get<std::vector<double>>();
  const auto hi = meta.at("hi").get<std::vector<double>>();
  if (static_cast<Index>(lo.size()) != dim ||
      static_cast<Index>(hi.size()) != dim)
    throw DataError("grid metadata bounds do not match the dimension");
  Mat points = reader.array(count, dim, name);
  return make_grid(std::move(points),
                   Eigen::Map<const Vec>(lo.data(), dim),
                   Eigen::Map<const Vec>(hi.data(), dim));
}

json ensemble_meta(const FeatureEnsemble& ensemble) {
  return json{{"distribution", to_string(ensemble.distribution)},
              {"gamma", ensemble.gamma},
              {"count", ensemble.count()},
              {"dim", ensemble.dim()},
              {"seed", ensemble.seed}};
}

FeatureEnsemble ensemble_from(Reader& reader, const json& meta) {
  FeatureEnsemble ensemble;
  ensemble.distribution = feature_distribution_from_string(
      meta.at("distribution").get<std::string>());
  ensemble.gamma = meta.at("gamma").get<double>();
  ensemble.seed = meta.at("seed").get<std::uint64_t>();
  ensemble.frequencies = reader.array(meta.at("count").get<Index>(),
                                      meta.at("dim").get<Index>(),
                                      "frequencies");
  return ensemble;
}

// complex N x m as re/im interleaved rows
Mat interleave(const CMat& values) {
  Mat packed(values.rows(), 2 * values.cols());
  for (Index j = 0; j < values.cols(); ++j) {
    packed.col(2 * j) = values.col(j).real();
    packed.col(2 * j + 1) = values.col(j).imag();
  }
  return packed;
}

CMat deinterleave(const Mat& packed) {
  CMat values(packed.rows(), packed.cols() / 2);
  for (Index j = 0; j < values.cols(); ++j) {
    values.col(j).real() = packed.col(2 * j);
    values.col(j).imag() = packed.col(2 * j + 1);
  }
  return values;
}

json recovery_meta(const RecoveryConfig& rec) {
  return json{{"distribution", to_string(rec.distribution)},
              {"gamma", rec.gamma},
              {"count", rec.feature_count},
              {"seed", rec.seed}};
}

RecoveryConfig recovery_from(const json& meta) {
  RecoveryConfig rec;
  rec.distribution = feature_distribution_from_string(
      meta.at("distribution").get<std::string>());
  rec.gamma = meta.at("gamma").get<double>();
  rec.feature_count = meta.at("count").get<Index>();
  rec.seed = meta.at("seed").get<std::uint64_t>();
  return rec;
}

json kernel_meta(const KernelSpec& spec) {
  json meta{{"kernel", to_string(spec.kind)}};
  if (spec.kind == KernelKind::Matern) {
    meta["sigma"] = spec.sigma;
    meta["nu"] = spec.nu;
  } else {
    meta["gamma"] = spec.gamma;
  }
  return meta;
}

KernelSpec kernel_from(const json& meta) {
  KernelSpec spec;
  spec.kind = kernel_kind_from_string(meta.at("kernel").get<std::string>());
  if (spec.kind == KernelKind::Matern) {
    spec.sigma = meta.at("sigma").get<double>();
    spec.nu = meta.at("nu").get<double>();
  } else {
    spec.gamma = meta.at("gamma").get<double>();
  }
  validate(spec);
  return spec;
}

}  // namespace

void write_grid(const std::string& path, const CollocationGrid& grid) {
  Writer w(path);
  w.header(json{{"kind", "grid"}, {"grid", grid_meta(grid)}});
  w.array(grid.points);
  w.close();
}

GridPtr read_grid(const std::string& path) {
  Reader r(path, "grid");
  GridPtr grid = grid_from(r, r.meta().at("grid"), "grid points");
  r.expect_eof();
  return grid;
}

void write_field(const std::string& path, const FieldSample& field) {
  Writer w(path);
  w.header(json{{"kind", "field"}, {"grid", grid_meta(*field.grid)}});
  w.array(field.grid->points);
  w.array(field.values);
  w.close();
}

FieldSample read_field(const std::string& path) {
  Reader r(path, "field");
  GridPtr grid = grid_from(r, r.meta().at("grid"), "grid points");
  Vec values = r.array(grid->count(), 1, "field values");
  r.expect_eof();
  return make_field(std::move(grid), std::move(values));
}

void write_ensemble(const std::string& path, const FeatureEnsemble& ensemble) {
  Writer w(path);
  w.header(json{{"kind", "ensemble"}, {"ensemble", ensemble_meta(ensemble)}});
  w.array(ensemble.frequencies);
  w.close();
}

FeatureEnsemble read_ensemble(const std::string& path) {
  Reader r(path, "ensemble");
  FeatureEnsemble ensemble = ensemble_from(r, r.meta().at("ensemble"));
  r.expect_eof();
  return ensemble;
}

void write_dataset(const std::string& path, const OperatorDataset& dataset) {
  Writer w(path);
  w.header(json{{"kind", "dataset"},
                {"input_grid", grid_meta(*dataset.input_grid)},
                {"output_grid", grid_meta(*dataset.output_grid)},
                {"sample_count", dataset.sample_count()}});
  w.array(dataset.input_grid->points);
  w.array(dataset.output_grid->points);
  w.array(dataset.inputs);
  w.array(dataset.outputs);
  w.close();
}

OperatorDataset read_dataset(const std::string& path) {
  Reader r(path, "dataset");
  GridPtr input_grid = grid_from(r, r.meta().at("input_grid"), "input grid");
  GridPtr output_grid =
      grid_from(r, r.meta().at("output_grid"), "output grid");
  const Index M = r.meta().at("sample_count").get<Index>();
  Mat inputs = r.array(M, input_grid->count(), "inputs");
  Mat outputs = r.array(M, output_grid->count(), "outputs");
  r.expect_eof();
  return make_dataset(std::move(input_grid), std::move(output_grid),
                      std::move(inputs), std::move(outputs));
}

void write_interpolant(const std::string& path,
                       const RandomFeatureInterpolant& interp) {
  Writer w(path);
  w.header(json{{"kind", "interpolant"},
                {"ensemble", ensemble_meta(interp.ensemble)},
                {"train_grid", grid_meta(*interp.train_grid)}});
  w.array(interp.train_grid->points);
  w.array(interp.ensemble.frequencies);
  w.array(interleave(interp.coefficients));
  w.close();
}

RandomFeatureInterpolant read_interpolant(const std::string& path) {
  Reader r(path, "interpolant");
  GridPtr grid = grid_from(r, r.meta().at("train_grid"), "train grid");
  FeatureEnsemble ensemble = ensemble_from(r, r.meta().at("ensemble"));
  CVec coeffs = deinterleave(r.array(ensemble.count(), 2, "coefficients"));
  r.expect_eof();
  return RandomFeatureInterpolant{std::move(ensemble), std::move(coeffs),
                                  std::move(grid)};
}

void write_model(const std::string& path, const OperatorModel& model) {
  Writer w(path);
  w.header(json{{"kind", "model"},
                {"input_grid", grid_meta(*model.input_grid)},
                {"output_grid", grid_meta(*model.output_grid)},
                {"ensemble", ensemble_meta(model.input_ensemble)},
                {"recovery", recovery_meta(model.recovery)}});
  w.array(model.input_grid->points);
  w.array(model.output_grid->points);
  w.array(model.input_ensemble.frequencies);
  w.array(interleave(model.coefficients));
  w.close();
}

OperatorModel read_model(const std::string& path) {
  Reader r(path, "model");
  GridPtr input_grid = grid_from(r, r.meta().at("input_grid"), "input grid");
  GridPtr output_grid =
      grid_from(r, r.meta().at("output_grid"), "output grid");
  FeatureEnsemble ensemble = ensemble_from(r, r.meta().at("ensemble"));
  CMat coeffs = deinterleave(
      r.array(ensemble.count(), 2 * output_grid->count(), "coefficients"));
  r.expect_eof();
  return OperatorModel{std::move(ensemble), std::move(coeffs),
                       std::move(input_grid), std::move(output_grid),
                       recovery_from(r.meta().at("recovery"))};
}

void write_kernel_spec(const std::string& path, const KernelSpec& spec) {
  validate(spec);
  Writer w(path);
  w.header(json{{"kind", "kernelspec"}, {"spec", kernel_meta(spec)}});
  w.close();
}

KernelSpec read_kernel_spec(const std::string& path) {
  Reader r(path, "kernelspec");
  KernelSpec spec = kernel_from(r.meta().at("spec"));
  r.expect_eof();
  return spec;
}

void export_dataset_csv(const std::string& path,
                        const OperatorDataset& dataset) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  const Index n = dataset.input_grid->count();
  const Index m = dataset.output_grid->count();
  for (Index j = 0; j < n; ++j) out << (j ? "," : "") << "u" << j;
  for (Index j = 0; j < m; ++j) out << ",v" << j;
  out << "\n";
  out << std::setprecision(17);
  for (Index l = 0; l < dataset.sample_count(); ++l) {
    for (Index j = 0; j < n; ++j)
      out << (j ? "," : "") << dataset.inputs(l, j);
    for (Index j = 0; j < m; ++j) out << "," << dataset.outputs(l, j);
    out << "\n";
  }
  if (!out) throw DataError("write failed for '" + path + "'");

  json sidecar{{"input_grid", grid_meta(*dataset.input_grid)},
               {"output_grid", grid_meta(*dataset.output_grid)}};
  auto points_list = [](const Mat& pts) {
    std::vector<std::vector<double>> rows;
    rows.reserve(pts.rows());
    for (Index i = 0; i < pts.rows(); ++i)
      rows.emplace_back(pts.row(i).begin(), pts.row(i).end());
    return rows;
  };
  sidecar["input_grid"]["points"] = points_list(dataset.input_grid->points);
  sidecar["output_grid"]["points"] = points_list(dataset.output_grid->points);
  std::ofstream side(path + ".grids.json");
  if (!side) throw DataError("cannot open '" + path + ".grids.json'");
  side << sidecar.dump(2) << "\n";
}

namespace {

GridPtr grid_from_sidecar(const json& meta) {
  const Index count = meta.at("count").get<Index>();
  const Index dim = meta.at("dim").get<Index>();
  const auto lo = meta.at("lo").get<std::vector<double>>();
  const auto hi = meta.at("hi").get<std::vector<double>>();
  const auto rows = meta.at("points").get<std::vector<std::vector<double>>>();
  if (static_cast<Index>(rows.size()) != count)
    throw DataError("grid sidecar: point count mismatch");
  Mat points(count, dim);
  for (Index i = 0; i < count; ++i) {
    if (static_cast<Index>(rows[i].size()) != dim)
      throw DataError("grid sidecar: point dimension mismatch");
    for (Index j = 0; j < dim; ++j) points(i, j) = rows[i][j];
  }
  return make_grid(std::move(points), Eigen::Map<const Vec>(lo.data(), dim),
                   Eigen::Map<const Vec>(hi.data(), dim));
}

}  // namespace

OperatorDataset import_dataset_csv(const std::string& path) {
  std::ifstream side_in(path + ".grids.json");
  if (!side_in)
    throw DataError("cannot open grid sidecar '" + path + ".grids.json'");
  json sidecar;
  try {
    side_in >> sidecar;
  } catch (const json::parse_error& e) {
    throw DataError("grid sidecar is not valid JSON: " + std::string(e.what()));
  }
  GridPtr input_grid = grid_from_sidecar(sidecar.at("input_grid"));
  GridPtr output_grid = grid_from_sidecar(sidecar.at("output_grid"));

  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line))
    throw DataError("'" + path + "': missing header row");
  const Index n = input_grid->count();
  const Index m = output_grid->count();

  std::vector<Vec> rows;
  Index line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Vec row(n + m);
    std::stringstream ss(line);
    std::string cell;
    Index col = 0;
    while (std::getline(ss, cell, ',')) {
      if (col >= n + m)
        throw DataError("'" + path + "' line " + std::to_string(line_no) +
                        ": too many columns");
      try {
        row[col] = std::stod(cell);
      } catch (const std::exception&) {
        throw DataError("'" + path + "' line " + std::to_string(line_no) +
                        ": cannot parse '" + cell + "'");
      }
      ++col;
    }
    if (col != n + m)
      throw DataError("'" + path + "' line " + std::to_string(line_no) +
                      ": expected " + std::to_string(n + m) +
                      " columns, got " + std::to_string(col));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("'" + path + "': no sample rows");

  Mat inputs(static_cast<Index>(rows.size()), n);
  Mat outputs(static_cast<Index>(rows.size()), m);
  for (size_t l = 0; l < rows.size(); ++l) {
    inputs.row(static_cast<Index>(l)) = rows[l].head(n).transpose();
    outputs.row(static_cast<Index>(l)) = rows[l].tail(m).transpose();
  }
  return make_dataset(std::move(input_grid), std::move(output_grid),
                      std::move(inputs), std::move(outputs));
}

}  // namespace rfol
