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

#ifndef RFOL_PARALLEL_HPP_
#define RFOL_PARALLEL_HPP_

#include <functional>

#include "rfol/types.hpp"

namespace rfol {

/// Worker cap for parallel_for. Defaults to the hardware concurrency, or to
/// the RFOL_THREADS environment variable when set.
int max_threads();
void set_max_threads(int threads);

/// Runs body(begin, end) over [0, n) split into fixed chunks of size `grain`.
/// The chunk boundaries depend only on (n, grain), never on the worker count,
/// so floating-point results are identical for any --threads setting. Nested
/// calls from inside a worker run inline.
void parallel_for(Index n, Index grain,
                  const std::function<void(Index, Index)>& body);

}  // namespace rfol

#endif  // RFOL_PARALLEL_HPP_
