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

#include "gbsopt/pattern.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "gbsopt/errors.hpp"

namespace gbsopt {

namespace {

__extension__ using UInt128 = unsigned __int128;

std::optional<std::uint64_t> checked_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) {
    return 0;
  }
  k = std::min(k, n - k);
  UInt128 r = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    // C(n, i+1) = C(n, i) * (n - i) / (i + 1), exact at every step.
    r = r * (n - i) / (i + 1);
    if (r > std::numeric_limits<std::uint64_t>::max()) {
      return std::nullopt;
    }
  }
  return static_cast<std::uint64_t>(r);
}

}  // namespace

PhotonPattern::PhotonPattern(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (std::uint8_t b : bits_) {
    if (b > 1) {
      throw InvalidArgument("PhotonPattern: entries must be 0 or 1");
    }
    count_ += b;
  }
}

PhotonPattern PhotonPattern::from_indices(std::size_t n, std::span<const std::size_t> ones) {
  std::vector<std::uint8_t> bits(n, 0);
  for (std::size_t i : ones) {
    if (i >= n) {
      throw InvalidArgument("PhotonPattern: index out of range");
    }
    if (bits[i]) {
      throw InvalidArgument("PhotonPattern: duplicate index");
    }
    bits[i] = 1;
  }
  return PhotonPattern(std::move(bits));
}

PhotonPattern PhotonPattern::from_bitstring(std::string_view text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw InvalidArgument("PhotonPattern: bitstring may only contain '0' and '1'");
    }
    bits.push_back(c == '1' ? 1 : 0);
  }
  return PhotonPattern(std::move(bits));
}

std::vector<std::size_t> PhotonPattern::ones() const {
  std::vector<std::size_t> idx;
  idx.reserve(count_);
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) {
      idx.push_back(i);
    }
  }
  return idx;
}

std::vector<std::size_t> PhotonPattern::zero_positions() const {
  std::vector<std::size_t> idx;
  idx.reserve(bits_.size() - count_);
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (!bits_[i]) {
      idx.push_back(i);
    }
  }
  return idx;
}

std::string PhotonPattern::bitstring() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) {
      s[i] = '1';
    }
  }
  return s;
}

std::size_t overlap(const PhotonPattern& a, const PhotonPattern& b) {
  if (a.size() != b.size()) {
    throw InvalidArgument("overlap: pattern lengths differ");
  }
  std::size_t shared = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    shared += (a[i] && b[i]) ? 1 : 0;
  }
  return shared;
}

ComplexMatrix submatrix(const ComplexMatrix& b, const PhotonPattern& s) {
  if (s.size() != b.dim()) {
    throw InvalidArgument("submatrix: pattern length " + std::to_string(s.size()) +
                          " does not match matrix dimension " + std::to_string(b.dim()));
  }
  const auto idx = s.ones();
  const std::size_t k = idx.size();
  std::vector<Complex> e(k * k);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      e[r * k + c] = b(idx[r], idx[c]);
    }
  }
  return ComplexMatrix(k, std::move(e), b.symmetric());
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  auto r = checked_binomial(n, k);
  if (!r) {
    throw ResourceLimit("binomial(" + std::to_string(n) + ", " + std::to_string(k) +
                        ") overflows 64 bits");
  }
  return *r;
}

std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k) {
  return checked_binomial(n, k).value_or(std::numeric_limits<std::uint64_t>::max());
}

double log_binomial(double a, std::size_t b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < b; ++i) {
    const double num = a - static_cast<double>(i);
    if (num <= 0.0) {
      return -std::numeric_limits<double>::infinity();
    }
    acc += std::log(num / static_cast<double>(b - i));
  }
  return acc;
}

bool next_pattern(std::span<std::uint8_t> bits) {
  const std::size_t n = bits.size();
  std::size_t ones_after = 0;
  std::size_t i = n;
  // Rightmost zero that still has a one to its right.
  while (i > 0) {
    --i;
    if (bits[i]) {
      ++ones_after;
    } else if (ones_after > 0) {
      bits[i] = 1;
      for (std::size_t j = i + 1; j < n; ++j) {
        bits[j] = 0;
      }
      for (std::size_t j = n - (ones_after - 1); j < n; ++j) {
        bits[j] = 1;
      }
      return true;
    }
  }
  return false;
}

std::uint64_t for_each_pattern(std::size_t n, std::size_t k,
                               const std::function<void(std::span<const std::uint8_t>, std::uint64_t)>& fn) {
  if (k > n) {
    throw InvalidArgument("for_each_pattern: k exceeds n");
  }
  std::vector<std::uint8_t> bits(n, 0);
  for (std::size_t j = n - k; j < n; ++j) {
    bits[j] = 1;
  }
  std::uint64_t rank = 0;
  do {
    fn(bits, rank);
    ++rank;
  } while (next_pattern(bits));
  return rank;
}

std::vector<PhotonPattern> enumerate_patterns(std::size_t n, std::size_t k, std::uint64_t limit) {
  if (k > n) {
    throw InvalidArgument("enumerate_patterns: k exceeds n");
  }
  const std::uint64_t total = binomial_saturating(n, k);
  if (total > limit) {
    throw ResourceLimit("enumerate_patterns: C(" + std::to_string(n) + ", " + std::to_string(k) +
                        ") exceeds the limit of " + std::to_string(limit));
  }
  std::vector<PhotonPattern> out;
  out.reserve(total);
  for_each_pattern(n, k, [&](std::span<const std::uint8_t> bits, std::uint64_t) {
    out.emplace_back(std::vector<std::uint8_t>(bits.begin(), bits.end()));
  });
  return out;
}

void unrank_pattern_into(std::size_t k, std::uint64_t rank, std::span<std::uint8_t> bits) {
  const std::size_t n = bits.size();
  std::size_t remaining = k;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t positions_left = n - i - 1;
    // Patterns whose bit i is zero come first.
    const std::uint64_t with_zero = remaining == 0 ? 1 : binomial(positions_left, remaining);
    if (remaining > 0 && rank >= with_zero) {
      rank -= with_zero;
      bits[i] = 1;
      --remaining;
    } else {
      bits[i] = 0;
    }
  }
  if (remaining != 0 || rank != 0) {
    throw InvalidArgument("unrank_pattern: rank out of range");
  }
}

PhotonPattern unrank_pattern(std::size_t n, std::size_t k, std::uint64_t rank) {
  if (k > n) {
    throw InvalidArgument("unrank_pattern: k exceeds n");
  }
  std::vector<std::uint8_t> bits(n, 0);
  unrank_pattern_into(k, rank, bits);
  return PhotonPattern(std::move(bits));
}

std::uint64_t rank_pattern(const PhotonPattern& s) {
  const std::size_t n = s.size();
  std::size_t remaining = s.count();
  std::uint64_t rank = 0;
  for (std::size_t i = 0; i < n && remaining > 0; ++i) {
    if (s[i]) {
      rank += binomial(n - i - 1, remaining);
      --remaining;
    }
  }
  return rank;
}

}  // namespace gbsopt
