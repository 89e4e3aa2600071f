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

#ifndef GBSOPT_PATTERN_HPP
#define GBSOPT_PATTERN_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gbsopt/matrix.hpp"

namespace gbsopt {

/// Collision-free photon pattern: a length-n 0/1 vector with a cached count
/// of ones. Doubles as the row/column selector for submatrices.
///
/// Ordering is lexicographic on the bitstring s_0 s_1 ... s_{n-1}, so among
/// equal-length patterns "000111" < "001011" < ... < "111000".
class PhotonPattern {
 public:
  PhotonPattern() = default;
  explicit PhotonPattern(std::vector<std::uint8_t> bits);

  static PhotonPattern zeros(std::size_t n) { return PhotonPattern(std::vector<std::uint8_t>(n, 0)); }
  static PhotonPattern from_indices(std::size_t n, std::span<const std::size_t> ones);
  static PhotonPattern from_bitstring(std::string_view bits);

  std::size_t size() const { return bits_.size(); }
  std::size_t count() const { return count_; }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  std::span<const std::uint8_t> bits() const { return bits_; }

  /// Indices of the ones, ascending.
  std::vector<std::size_t> ones() const;
  std::vector<std::size_t> zero_positions() const;

  std::string bitstring() const;

  friend bool operator==(const PhotonPattern&, const PhotonPattern&) = default;
  friend std::strong_ordering operator<=>(const PhotonPattern& a, const PhotonPattern& b) {
    return a.bits_ <=> b.bits_;
  }

 private:
  std::vector<std::uint8_t> bits_;
  std::size_t count_ = 0;
};

/// Number of positions that are one in both patterns.
std::size_t overlap(const PhotonPattern& a, const PhotonPattern& b);

/// Rows and columns i with s_i = 1, in ascending index order. Keeps the
/// symmetric flag.
ComplexMatrix submatrix(const ComplexMatrix& b, const PhotonPattern& s);

// Combinatorics over Gamma_{n,k}, the set of length-n patterns with k ones.

/// C(n, k) in 64 bits; throws ResourceLimit on overflow.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// C(n, k), saturating at UINT64_MAX instead of throwing.
std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k);

/// ln C(a, b) for real a and integer b >= 0, by direct product; -inf when
/// the binomial vanishes.
double log_binomial(double a, std::size_t b);

inline constexpr std::uint64_t kDefaultPatternLimit = 100'000'000;

/// Every pattern of Gamma_{n,k} in lexicographic order. Refuses
/// C(n,k) > limit with ResourceLimit.
std::vector<PhotonPattern> enumerate_patterns(std::size_t n, std::size_t k,
                                              std::uint64_t limit = kDefaultPatternLimit);

/// Streams Gamma_{n,k} in lexicographic order without materializing it.
/// The callback sees the pattern as a bit span and its rank. Returns the
/// number of patterns visited.
std::uint64_t for_each_pattern(std::size_t n, std::size_t k,
                               const std::function<void(std::span<const std::uint8_t>, std::uint64_t)>& fn);

/// Advances bits to the lexicographic successor with the same count of ones.
/// Returns false (and leaves bits unchanged) at the last pattern.
bool next_pattern(std::span<std::uint8_t> bits);

/// Pattern at position rank in the lexicographic order of Gamma_{n,k}.
PhotonPattern unrank_pattern(std::size_t n, std::size_t k, std::uint64_t rank);
void unrank_pattern_into(std::size_t k, std::uint64_t rank, std::span<std::uint8_t> bits);

/// Inverse of unrank_pattern.
std::uint64_t rank_pattern(const PhotonPattern& s);

}  // namespace gbsopt

#endif  // GBSOPT_PATTERN_HPP
