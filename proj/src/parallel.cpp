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

#include "rfol/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rfol {

namespace {

std::atomic<int> g_max_threads{0};
thread_local bool t_inside_worker = false;

int default_threads() {
  if (const char* env = std::getenv("RFOL_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

int max_threads() {
  int n = g_max_threads.load();
  if (n <= 0) {
    n = default_threads();
    g_max_threads.store(n);
  }
  return n;
}

void set_max_threads(int threads) {
  g_max_threads.store(threads > 0 ? threads : 1);
}

void parallel_for(Index n, Index grain,
                  const std::function<void(Index, Index)>& body) {
  if (n <= 0) return;
  if (grain < 1) grain = 1;
  const Index chunks = (n + grain - 1) / grain;
  const int workers =
      static_cast<int>(std::min<Index>(chunks, max_threads()));

  if (workers <= 1 || t_inside_worker) {
    for (Index c = 0; c < chunks; ++c)
      body(c * grain, std::min(n, (c + 1) * grain));
    return;
  }

  std::atomic<Index> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    t_inside_worker = true;
    for (;;) {
      const Index c = next.fetch_add(1);
      if (c >= chunks) break;
      try {
        body(c * grain, std::min(n, (c + 1) * grain));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        break;
      }
    }
    t_inside_worker = false;
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int t = 1; t < workers; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace rfol
