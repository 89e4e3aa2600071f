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

#ifndef GBSOPT_HAFNIAN_HPP
#define GBSOPT_HAFNIAN_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gbsopt/matrix.hpp"
#include "gbsopt/random.hpp"

namespace gbsopt {

/// A pairing of {0, ..., 2m-1}. Each pair is (low, high) and pairs are
/// sorted by their low element, so every matching has one representation.
struct PerfectMatching {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  friend bool operator==(const PerfectMatching&, const PerfectMatching&) = default;
};

inline constexpr std::size_t kDefaultMaxMatchingHalfSize = 9;
inline constexpr std::size_t kMaxRecursiveHafnianDim = 24;

/// k!! with 0!! = (-1)!! = 1. k <= 33 (64-bit range).
std::uint64_t double_factorial(int k);

/// All (2m-1)!! perfect matchings of 2m points in canonical order (the
/// lowest free index is paired with each higher free index in turn).
/// m above max_m raises ResourceLimit.
std::vector<PerfectMatching> enumerate_pmp(std::size_t m,
                                           std::size_t max_m = kDefaultMaxMatchingHalfSize);

/// Streaming form of enumerate_pmp; the callback receives the pairs of each
/// matching in canonical order. No size guard.
void for_each_pmp(std::size_t m,
                  const std::function<void(std::span<const std::pair<std::size_t, std::size_t>>)>& fn);

/// Hafnian straight from its definition: the sum over perfect matchings of
/// the product of matched entries. 0 for odd dimension, 1 for 0 x 0.
Complex hafnian_definition(const ComplexMatrix& x,
                           std::size_t max_m = kDefaultMaxMatchingHalfSize);

/// Hafnian by first-row expansion,
///   Haf(X) = sum_{j>0} X_0j Haf(X without rows/cols 0 and j).
/// Only entries above the diagonal are read. dim <= 24.
Complex hafnian(const ComplexMatrix& x);

/// Hafnian of the principal submatrix of b on the given (distinct) indices,
/// without materializing it.
Complex hafnian_of_indices(const ComplexMatrix& b, std::span<const std::size_t> indices);

/// Monte-Carlo estimate of E|Haf X|^2 and E|Haf X|^4 over the symmetric
/// standard complex Gaussian ensemble.
struct MomentEstimate {
  int k = 0;
  std::size_t trials = 0;
  double mean2 = 0.0;
  double stderr2 = 0.0;
  double mean4 = 0.0;
  double stderr4 = 0.0;
};

nlohmann::json to_json(const MomentEstimate& m);

MomentEstimate haf_moments_mc(int k, std::size_t trials, RandomStream& rng);

/// Closed-form E|Haf B_S|^2 = tanh(r)^k / n^{k/2} (k-1)!! and
/// E|Haf B_S|^4 = tanh(r)^{2k} / n^k k! for the rescaled Gaussian ensemble.
std::pair<double, double> scaled_haf_moments(int k, std::size_t n, double r);

/// Cycle structure of G_xi(m): the identity matching {(0,1),(2,3),...}
/// overlaid with xi.
struct MatchingCycles {
  PerfectMatching xi;
  std::size_t cycles = 0;        ///< all cycles, a doubled edge counts as a 1-cycle
  std::size_t one_cycles = 0;    ///< equals K(identity, xi)
  std::uint64_t alternatives = 0;  ///< N(identity, xi) = 2^(cycles of length >= 2)
};

struct CycleSumResult {
  std::uint64_t sum = 0;  ///< sum over xi of 2^cycles(xi)
  std::vector<MatchingCycles> per_matching;
};

MatchingCycles matching_cycles(std::span<const std::pair<std::size_t, std::size_t>> xi);

/// Sum over xi in PMP_{2m} of 2^cyc(xi); equals (2m)!!. m <= max_m (8).
CycleSumResult pmp_cycle_sum(std::size_t m, bool keep_details = false, std::size_t max_m = 8);

}  // namespace gbsopt

#endif  // GBSOPT_HAFNIAN_HPP
