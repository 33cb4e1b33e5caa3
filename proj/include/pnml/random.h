/*
 * Copyright 2026 The PNML Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PNML_RANDOM_H_
#define PNML_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace pnml {

// Seeded generator whose derived draws (uniform reals, bounded integers,
// shuffles) are defined here rather than by the standard library's
// implementation-specific distributions, so results match across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, bound). Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t bound);

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Deterministic seed derivation: mixes a parent seed with a stream name and
// up to two integer coordinates (e.g. epoch and label).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream,
                          std::uint64_t a = 0, std::uint64_t b = 0);

// 64-bit FNV-1a over bytes.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace pnml

#endif  // PNML_RANDOM_H_
