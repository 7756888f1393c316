// Copyright 2026 The Groundkit Authors
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

#include <cstdint>
#include <string_view>

namespace groundkit {

// All stochastic components use this fixed 64-bit generator so that runs are
// bit-reproducible across platforms and standard-library versions.
//
// The algorithm is SplitMix64 (Steele, Lea & Flood; also the seeding routine
// recommended for the xoshiro family): a 64-bit Weyl sequence with increment
// 0x9E3779B97F4A7C15 passed through a two-round xor-shift-multiply finalizer.
// std::mt19937 and std::uniform_int_distribution are deliberately avoided:
// the distribution's output is not pinned by the C++ standard.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, bound) via Lemire's multiply-shift reduction with
  // rejection, so results are exactly uniform and platform-independent.
  std::uint64_t bounded(std::uint64_t bound) {
    if (bound <= 1) return 0;
    while (true) {
      std::uint64_t x = next();
      __uint128_t m = static_cast<__uint128_t>(x) * bound;
      std::uint64_t low = static_cast<std::uint64_t>(m);
      if (low >= bound || low >= static_cast<std::uint64_t>(-bound) % bound) {
        return static_cast<std::uint64_t>(m >> 64);
      }
    }
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// FNV-1a, used only to fold strings into seeds and for cheap content keys.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x00000100000001B3ULL;
  }
  return h;
}

// Derives an independent stream for a named component from the global seed.
// Every pipeline stage draws its seed through this, so adding or reordering
// stages does not disturb the others.
inline std::uint64_t derive_seed(std::uint64_t global_seed,
                                 std::string_view label) {
  return SplitMix64(global_seed ^ fnv1a64(label)).next();
}

}  // namespace groundkit
