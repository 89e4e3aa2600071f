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

// Independent reference computations shared by the unit and acceptance
// tests. None of these call into the library code they check.

#ifndef GBSOPT_TESTS_TEST_ORACLES_HPP
#define GBSOPT_TESTS_TEST_ORACLES_HPP

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

namespace gbsopt::test {

/// E[max of kappa draws] from p(y) = lambda e^{lambda(y-1)} / (1 - e^{-lambda}),
/// as 1 - integral of F(y)^kappa over [0, 1] with F the CDF of p. The
/// interval is split where F^kappa turns on so the adaptive rule sees a
/// smooth integrand on each piece.
inline double expected_max_quadrature(double lambda, std::size_t kappa) {
  const double k = static_cast<double>(kappa);
  auto tail = [&](double y) {
    if (y <= 0.0) {
      return 0.0;
    }
    return std::exp(k * std::log(std::expm1(lambda * y) / std::expm1(lambda)));
  };
  using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double width = std::min(0.5, 1.0 / (lambda * k) + 1.0 / (k + 1.0));
  double integral = 0.0;
  double lo = 0.0;
  for (double hi : {1.0 - 40.0 * width, 1.0 - 8.0 * width, 1.0 - width, 1.0}) {
    if (hi <= lo) {
      continue;
    }
    integral += Rule::integrate(tail, lo, hi, 15, 1e-13);
    lo = hi;
  }
  return 1.0 - integral;
}

/// C(n,k) k!! / (C((n+k)/2 - 1, k/2) n^{k/2}) in exact rational arithmetic.
/// The lower binomial has a possibly half-integer top and is expanded as a
/// falling factorial.
inline double exact_ratio_R(std::size_t n, std::size_t k) {
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::cpp_rational;
  cpp_rational num = 1;
  for (std::size_t i = 0; i < k; ++i) {
    num *= cpp_rational(cpp_int(n - i), cpp_int(i + 1));
  }
  for (std::size_t i = k; i > 1; i -= 2) {
    num *= cpp_int(i);
  }
  const cpp_rational top = cpp_rational(cpp_int(n + k), 2) - 1;
  cpp_rational den = 1;
  for (std::size_t i = 0; i < k / 2; ++i) {
    den *= (top - cpp_rational(cpp_int(i))) / cpp_rational(cpp_int(i + 1));
  }
  for (std::size_t i = 0; i < k / 2; ++i) {
    den *= cpp_int(n);
  }
  return static_cast<double>(num / den);
}

/// Largest even clique of a graph given by adjacency bitmasks, by direct
/// subset search.
inline std::size_t brute_force_even_clique(const std::vector<std::uint32_t>& adj) {
  const std::size_t n = adj.size();
  std::size_t best = 0;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
    const auto size = static_cast<std::size_t>(__builtin_popcount(mask));
    if (size % 2 != 0 || size <= best) {
      continue;
    }
    bool clique = true;
    for (std::size_t v = 0; v < n && clique; ++v) {
      if ((mask >> v) & 1u) {
        clique = ((adj[v] | (std::uint32_t{1} << v)) & mask) == mask;
      }
    }
    if (clique) {
      best = size;
    }
  }
  return best;
}

}  // namespace gbsopt::test

#endif  // GBSOPT_TESTS_TEST_ORACLES_HPP
