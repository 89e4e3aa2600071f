// Copyright 2026 The gbsopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GBSOPT_RANDOM_HPP
#define GBSOPT_RANDOM_HPP

#include <complex>
#include <cstdint>
#include <random>

namespace gbsopt {

/// Reproducible pseudorandom stream.
///
/// The engine is std::mt19937_64 seeded with splitmix64(seed). Its output
/// sequence is fixed by the C++ standard, and every transform below
/// (uniform doubles, bounded integers, Box-Muller normals) is implemented
/// here rather than through <random> distributions, whose algorithms vary
/// between standard libraries. Identical seeds therefore give identical
/// sequences on every platform.
///
/// A stream is single-owner. Parallel work uses substream(i), which derives
/// an independent seed from (seed, i).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Uniform on (0, 1].
  double uniform_open_closed() { return 1.0 - uniform(); }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Standard normal, mean 0 and variance 1.
  double normal();

  /// Circular complex normal with E|z|^2 = sigma^2; the real and imaginary
  /// parts are independent with variance sigma^2 / 2 each.
  std::complex<double> complex_normal(double sigma);

  RandomStream substream(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// splitmix64 finalizer; used for seeding and substream derivation.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace gbsopt

#endif  // GBSOPT_RANDOM_HPP
