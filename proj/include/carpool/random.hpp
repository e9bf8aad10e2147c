// Copyright 2026 The carpool-qoe Authors.
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

#ifndef CARPOOL_RANDOM_HPP
#define CARPOOL_RANDOM_HPP

#include <cstdint>
#include <limits>
#include <random>

namespace carpool {

/// Seeded generator whose every draw is fully specified, so that scenarios
/// and Monte-Carlo estimates are reproducible across compilers and ports.
///
///   engine   : 64-bit Mersenne Twister (std::mt19937_64) seeded with the
///              raw 64-bit seed via its single-integer constructor
///   unit()   : (next() >> 11) * 2^-53, a double in [0, 1)
///   uniform  : lo + (hi - lo) * unit(); returns lo when lo == hi
///   below(n) : next() % n, redrawing while next() > 2^64 - 1 - (2^64 mod n)
///
/// The standard distribution classes are avoided because their algorithms
/// are implementation-defined.
class rng {
public:
  explicit rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) {
    if (lo == hi) {
      next();
      return lo;
    }
    return lo + (hi - lo) * unit();
  }

  /// Uniform integer in [0, n). `n` must be positive.
  std::uint64_t below(std::uint64_t n) {
    constexpr auto max = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t const limit = max - ((max % n) + 1) % n;
    std::uint64_t x = next();
    while (x > limit) x = next();
    return x % n;
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace carpool

#endif  // CARPOOL_RANDOM_HPP
