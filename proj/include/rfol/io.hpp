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

#ifndef RFOL_IO_HPP_
#define RFOL_IO_HPP_

#include <string>

#include "rfol/types.hpp"

namespace rfol {

// Binary container, little-endian throughout:
//
//   magic "RFOL" | u32 version (= 1) | u64 metadata length | metadata JSON |
//   raw float64 arrays
//
// The metadata block carries a "kind" tag plus every generating parameter
// (grids, dims, counts, distribution, gamma, seeds), so any artifact is
// reproducible from its file alone. Array order per kind:
//
//   grid         points (count x dim, row-major)
//   field        grid points, values
//   ensemble     frequencies (count x dim, row-major)
//   dataset      input grid points, output grid points,
//                inputs (M x n, row-major), outputs (M x m, row-major)
//   interpolant  train grid points, frequencies,
//                coefficients (re, im interleaved, row-major)
//   model        input grid points, output grid points, frequencies,
//                coefficients (N x m, re/im interleaved, row-major)
//   kernelspec   (no arrays)
//
// Malformed headers, length mismatches and non-finite values are reported as
// DataError with the byte offset of the fault.

void write_grid(const std::string& path, const CollocationGrid& grid);
GridPtr read_grid(const std::string& path);

void write_field(const std::string& path, const FieldSample& field);
FieldSample read_field(const std::string& path);

void write_ensemble(const std::string& path, const FeatureEnsemble& ensemble);
FeatureEnsemble read_ensemble(const std::string& path);

void write_dataset(const std::string& path, const OperatorDataset& dataset);
OperatorDataset read_dataset(const std::string& path);

void write_interpolant(const std::string& path,
                       const RandomFeatureInterpolant& interp);
RandomFeatureInterpolant read_interpolant(const std::string& path);

void write_model(const std::string& path, const OperatorModel& model);
OperatorModel read_model(const std::string& path);

void write_kernel_spec(const std::string& path, const KernelSpec& spec);
KernelSpec read_kernel_spec(const std::string& path);

// CSV interop for external benchmark dumps: one row per sample, columns are
// the input values followed by the output values, header row "u0,...,v0,...".
// The grids live in a JSON sidecar "<path>.grids.json".
void export_dataset_csv(const std::string& path,
                        const OperatorDataset& dataset);
OperatorDataset import_dataset_csv(const std::string& path);

}  // namespace rfol

#endif  // RFOL_IO_HPP_
