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

#include "gbsopt/hafnian.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "gbsopt/ensembles.hpp"
#include "gbsopt/errors.hpp"

namespace gbsopt {

namespace {

using Pair = std::pair<std::size_t, std::size_t>;

inline const Complex& upper(const ComplexMatrix& b, std::size_t i, std::size_t j) {
  return i < j ? b(i, j) : b(j, i);
}

void pmp_recurse(std::vector<std::size_t>& free_idx, std::vector<Pair>& current,
                 const std::function<void(std::span<const Pair>)>& fn) {
  if (free_idx.empty()) {
    fn(current);
    return;
  }
  const std::size_t first = free_idx.front();
  for (std::size_t pos = 1; pos < free_idx.size(); ++pos) {
    const std::size_t partner = free_idx[pos];
    std::vector<std::size_t> rest;
    rest.reserve(free_idx.size() - 2);
    for (std::size_t q = 1; q < free_idx.size(); ++q) {
      if (q != pos) {
        rest.push_back(free_idx[q]);
      }
    }
    current.emplace_back(first, partner);
    pmp_recurse(rest, current, fn);
    current.pop_back();
  }
}

Complex haf_recurse(const ComplexMatrix& b, const std::size_t* idx, std::size_t len) {
  if (len == 0) {
    return 1.0;
  }
  if (len == 2) {
    return upper(b, idx[0], idx[1]);
  }
  std::array<std::size_t, kMaxRecursiveHafnianDim> rest{};
  Complex acc = 0.0;
  for (std::size_t j = 1; j < len; ++j) {
    const Complex& head = upper(b, idx[0], idx[j]);
    if (head == Complex(0.0)) {
      continue;
    }
    std::size_t w = 0;
    for (std::size_t q = 1; q < len; ++q) {
      if (q != j) {
        rest[w++] = idx[q];
      }
    }
    acc += head * haf_recurse(b, rest.data(), len - 2);
  }
  return acc;
}

}  // namespace

std::uint64_t double_factorial(int k) {
  if (k < -1) {
    throw InvalidArgument("double_factorial: k must be >= -1");
  }
  if (k > 33) {
    throw ResourceLimit("double_factorial: " + std::to_string(k) + "!! overflows 64 bits (k <= 33)");
  }
  std::uint64_t r = 1;
  for (int i = k; i > 1; i -= 2) {
    r *= static_cast<std::uint64_t>(i);
  }
  return r;
}

void for_each_pmp(std::size_t m, const std::function<void(std::span<const Pair>)>& fn) {
  std::vector<std::size_t> free_idx(2 * m);
  for (std::size_t i = 0; i < 2 * m; ++i) {
    free_idx[i] = i;
  }
  std::vector<Pair> current;
  current.reserve(m);
  pmp_recurse(free_idx, current, fn);
}

std::vector<PerfectMatching> enumerate_pmp(std::size_t m, std::size_t max_m) {
  if (m > max_m) {
    throw ResourceLimit("enumerate_pmp: m = " + std::to_string(m) + " exceeds the limit " +
                        std::to_string(max_m) + " ((2m-1)!! matchings)");
  }
  std::vector<PerfectMatching> out;
  out.reserve(double_factorial(static_cast<int>(2 * m) - 1));
  for_each_pmp(m, [&](std::span<const Pair> pairs) {
    out.push_back(PerfectMatching{{pairs.begin(), pairs.end()}});
  });
  return out;
}

Complex hafnian_definition(const ComplexMatrix& x, std::size_t max_m) {
  const std::size_t dim = x.dim();
  if (dim % 2 != 0) {
    return 0.0;
  }
  const std::size_t m = dim / 2;
  if (m > max_m) {
    throw ResourceLimit("hafnian_definition: dimension " + std::to_string(dim) +
                        " exceeds the perfect-matching limit 2*" + std::to_string(max_m));
  }
  Complex total = 0.0;
  for_each_pmp(m, [&](std::span<const Pair> pairs) {
    Complex prod = 1.0;
    for (const auto& [lo, hi] : pairs) {
      prod *= x(lo, hi);
    }
    total += prod;
  });
  return total;
}

Complex hafnian_of_indices(const ComplexMatrix& b, std::span<const std::size_t> indices) {
  const std::size_t len = indices.size();
  if (len % 2 != 0) {
    return 0.0;
  }
  if (len > kMaxRecursiveHafnianDim) {
    throw ResourceLimit("hafnian: dimension " + std::to_string(len) + " exceeds the limit " +
                        std::to_string(kMaxRecursiveHafnianDim));
  }
  return haf_recurse(b, indices.data(), len);
}

Complex hafnian(const ComplexMatrix& x) {
  const std::size_t dim = x.dim();
  if (dim % 2 != 0) {
    return 0.0;
  }
  if (dim > kMaxRecursiveHafnianDim) {
    throw ResourceLimit("hafnian: dimension " + std::to_string(dim) + " exceeds the limit " +
                        std::to_string(kMaxRecursiveHafnianDim));
  }
  std::array<std::size_t, kMaxRecursiveHafnianDim> idx{};
  for (std::size_t i = 0; i < dim; ++i) {
    idx[i] = i;
  }
  return haf_recurse(x, idx.data(), dim);
}

nlohmann::json to_json(const MomentEstimate& m) {
  return {{"k", m.k},         {"trials", m.trials}, {"mean2", m.mean2},
          {"stderr2", m.stderr2}, {"mean4", m.mean4},   {"stderr4", m.stderr4}};
}

MomentEstimate haf_moments_mc(int k, std::size_t trials, RandomStream& rng) {
  if (k % 2 != 0) {
    throw InvalidArgument("haf_moments_mc: k must be even, got " + std::to_string(k));
  }
  if (k < 2 || k > 12) {
    throw InvalidArgument("haf_moments_mc: k must lie in [2, 12]");
  }
  if (trials < 100) {
    throw InvalidArgument("haf_moments_mc: need at least 100 trials");
  }
  // Welford accumulators for a = |Haf|^2 and a^2 = |Haf|^4.
  double m2 = 0.0, s2 = 0.0, m4 = 0.0, s4 = 0.0;
  for (std::size_t t = 1; t <= trials; ++t) {
    const ComplexMatrix x = gaussian_symmetric(static_cast<std::size_t>(k), 1.0, rng);
    const double a = std::norm(hafnian(x));
    const double a2 = a * a;
    const double d2 = a - m2;
    m2 += d2 / static_cast<double>(t);
    s2 += d2 * (a - m2);
    const double d4 = a2 - m4;
    m4 += d4 / static_cast<double>(t);
    s4 += d4 * (a2 - m4);
  }
  const double n = static_cast<double>(trials);
  MomentEstimate est;
  est.k = k;
  est.trials = trials;
  est.mean2 = m2;
  est.stderr2 = std::sqrt(s2 / (n - 1.0) / n);
  est.mean4 = m4;
  est.stderr4 = std::sqrt(s4 / (n - 1.0) / n);
  return est;
}

std::pair<double, double> scaled_haf_moments(int k, std::size_t n, double r) {
  if (k < 2 || k % 2 != 0) {
    throw InvalidArgument("scaled_haf_moments: k must be even and at least 2");
  }
  if (n == 0) {
    throw InvalidArgument("scaled_haf_moments: n must be positive");
  }
  const double t = std::tanh(r);
  const double nd = static_cast<double>(n);
  double k_fact = 1.0;
  for (int i = 2; i <= k; ++i) {
    k_fact *= i;
  }
  double odd_df = 1.0;
  for (int i = k - 1; i > 1; i -= 2) {
    odd_df *= i;
  }
  const double first = std::pow(t, k) / std::pow(nd, k / 2) * odd_df;
  const double second = std::pow(t, 2 * k) / std::pow(nd, k) * k_fact;
  return {first, second};
}

MatchingCycles matching_cycles(std::span<const Pair> xi) {
  const std::size_t nodes = 2 * xi.size();
  std::vector<std::size_t> partner(nodes, nodes);
  for (const auto& [lo, hi] : xi) {
    if (lo >= nodes || hi >= nodes || partner[lo] != nodes || partner[hi] != nodes) {
      throw InvalidArgument("matching_cycles: not a perfect matching");
    }
    partner[lo] = hi;
    partner[hi] = lo;
  }
  MatchingCycles out;
  out.xi.pairs.assign(xi.begin(), xi.end());
  std::vector<bool> seen(nodes, false);
  for (std::size_t start = 0; start < nodes; ++start) {
    if (seen[start]) {
      continue;
    }
    // Alternate identity edge (v, v^1) and xi edge until back at start.
    std::size_t length = 0;
    std::size_t v = start;
    for (;;) {
      const std::size_t mate = v ^ 1U;
      seen[v] = true;
      seen[mate] = true;
      ++length;
      v = partner[mate];
      if (v == start) {
        break;
      }
    }
    ++out.cycles;
    if (length == 1) {
      ++out.one_cycles;
    }
  }
  out.alternatives = std::uint64_t{1} << (out.cycles - out.one_cycles);
  return out;
}

CycleSumResult pmp_cycle_sum(std::size_t m, bool keep_details, std::size_t max_m) {
  if (m < 1) {
    throw InvalidArgument("pmp_cycle_sum: m must be positive");
  }
  if (m > max_m) {
    throw ResourceLimit("pmp_cycle_sum: m = " + std::to_string(m) + " exceeds the limit " +
                        std::to_string(max_m));
  }
  CycleSumResult result;
  for_each_pmp(m, [&](std::span<const Pair> pairs) {
    MatchingCycles mc = matching_cycles(pairs);
    result.sum += std::uint64_t{1} << mc.cycles;
    if (keep_details) {
      result.per_matching.push_back(std::move(mc));
    }
  });
  return result;
}

}  // namespace gbsopt
