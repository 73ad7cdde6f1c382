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

#ifndef RFOL_RNG_HPP_
#define RFOL_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>

namespace rfol {

/// All randomness in the library flows through this generator so that every
/// sampled object is reproducible from its seed.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Uniform variates take the top 53 bits plus a half-ulp offset,
/// u = (bits >> 11 + 0.5) * 2^-53, which lies strictly inside (0, 1). On top
/// of that:
///   - cauchy(g)  = g * tan(pi * (u - 1/2))        (inverse CDF, one uniform)
///   - normal(sd) = sd * sqrt(-2 ln u1) * cos(2 pi u2)
///     (Box-Muller cosine branch, exactly two uniforms per draw)
/// Streams are therefore identical across platforms up to libm rounding of
/// tan/log/cos.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  double cauchy(double gamma) {
    constexpr double kPi = 3.14159265358979323846;
    return gamma * std::tan(kPi * (uniform01() - 0.5));
  }

  double normal(double stddev = 1.0) {
    constexpr double kTwoPi = 6.28318530717958647692;
    const double u1 = uniform01();
    const double u2 = uniform01();
    return stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 mix of (base, stream); used wherever one user seed has to fan
/// out into independent per-sample or per-trial streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace rfol

#endif  // RFOL_RNG_HPP_
