// Copyright 2026 The mtmct Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mtmct {

/// Deterministic random source. The mt19937_64 engine is bit-exact across
/// platforms; the distributions are hand-rolled because the standard library
/// ones are not. Every stochastic component of the library draws from this
/// class so that a (seed, stream) pair pins the full output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of precision.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  /// Uniform integer in [0, n). Rejection keeps the draw unbiased.
  std::size_t uniform_index(std::size_t n) {
    if (n == 0) {
      throw std::invalid_argument("uniform_index: n must be positive");
    }
    const std::uint64_t un = n;
    // 2^64 mod n; values >= 2^64 - m are rejected.
    const std::uint64_t m =
        (std::numeric_limits<std::uint64_t>::max() % un + 1) % un;
    std::uint64_t x = engine_();
    if (m != 0) {
      const std::uint64_t bound = ~m + 1;  // 2^64 - m
      while (x >= bound) {
        x = engine_();
      }
    }
    return static_cast<std::size_t>(x % un);
  }

  /// Standard normal via Box-Muller. Consumes two uniforms per call.
  double normal() {
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(2.0 * M_PI * u2);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Fisher-Yates with the unbiased index draw above.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = uniform_index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mtmct
