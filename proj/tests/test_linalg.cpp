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

#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <vector>

#include "gbsopt/ensembles.hpp"
#include "gbsopt/errors.hpp"
#include "gbsopt/matrix.hpp"
#include "gbsopt/pattern.hpp"
#include "gbsopt/random.hpp"

using namespace gbsopt;

namespace {

Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
  Eigen::MatrixXcd e(m.dim(), m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) {
      e(i, j) = m(i, j);
    }
  }
  return e;
}

double unitarity_defect(const ComplexMatrix& u) {
  return ComplexMatrix::max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(u.dim()));
}

double normal_cdf(double x, double variance) { return 0.5 * std::erfc(-x / std::sqrt(2.0 * variance)); }

}  // namespace

TEST_CASE("random stream is reproducible and substreams differ") {
  RandomStream a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
  }
  RandomStream d(42);
  CHECK(d.next_u64() != c.next_u64());

  const RandomStream base(7);
  RandomStream s1 = base.substream(1), s1b = base.substream(1), s2 = base.substream(2);
  const auto v = s1.next_u64();
  CHECK(v == s1b.next_u64());
  CHECK(v != s2.next_u64());
}

TEST_CASE("random stream uniform and below stay in range") {
  RandomStream rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK((u >= 0.0 && u < 1.0));
    const double w = rng.uniform_open_closed();
    CHECK((w > 0.0 && w <= 1.0));
    CHECK(rng.below(7) < 7u);
  }
}

TEST_CASE("complex normal has E|z|^2 = sigma^2") {
  RandomStream rng(3);
  const int n = 100000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = std::norm(rng.complex_normal(2.0));
    sum += a;
    sum2 += a * a;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum2 / n - mean * mean) / n);
  CHECK(std::abs(mean - 4.0) < 3 * se);
}

TEST_CASE("symmetric matrices mirror the upper triangle") {
  std::vector<Complex> e = {{1, 0}, {2, 1}, {9, 9}, {4, 0}};
  ComplexMatrix m(2, e, true);
  CHECK(m(1, 0) == Complex(2, 1));
  CHECK(m(0, 1) == m(1, 0));
  CHECK_THROWS_AS(ComplexMatrix(2, std::vector<Complex>(3)), InvalidArgument);
}

TEST_CASE("matrix JSON round trip is bit exact") {
  RandomStream rng(11);
  const ComplexMatrix b = coe_matrix({0.7, 5}, rng);
  const ComplexMatrix back = matrix_from_json(to_json(b));
  CHECK(back == b);
  CHECK(back.symmetric());

  const auto path = std::filesystem::temp_directory_path() / "gbsopt_linalg_roundtrip.json";
  save_matrix(b, path);
  CHECK(load_matrix(path) == b);
  std::filesystem::remove(path);

  auto j = to_json(b);
  j["entries"][1] = {0.5, 0.5};
  CHECK_THROWS_AS(matrix_from_json(j), InvalidArgument);
}

TEST_CASE("haar_unitary") {
  SUBCASE("1x1 is a phase") {
    RandomStream rng(5);
    const auto u = haar_unitary(1, rng);
    CHECK(std::abs(std::abs(u(0, 0)) - 1.0) < 1e-12);
  }
  SUBCASE("n = 0 is rejected") {
    RandomStream rng(5);
    CHECK_THROWS_AS(haar_unitary(0, rng), InvalidArgument);
  }
  SUBCASE("unitary for n <= 16 and 100 seeds") {
    double worst = 0.0;
    for (std::size_t n = 1; n <= 16; ++n) {
      for (std::uint64_t seed = 0; seed < 100; ++seed) {
        RandomStream rng(seed * 131 + n);
        worst = std::max(worst, unitarity_defect(haar_unitary(n, rng)));
      }
    }
    CHECK(worst < 1e-10);
  }
  SUBCASE("E|U00|^2 = 1/2 for n = 2") {
    RandomStream rng(17);
    const int draws = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < draws; ++i) {
      const double a = std::norm(haar_unitary(2, rng)(0, 0));
      sum += a;
      sum2 += a * a;
    }
    const double mean = sum / draws;
    const double se = std::sqrt((sum2 / draws - mean * mean) / draws);
    CHECK(std::abs(mean - 0.5) < 3 * se);
  }
  SUBCASE("phases of the first row are uniform") {
    // Without the phase correction arg(U00) concentrates near 0.
    RandomStream rng(23);
    const int draws = 20000;
    double c = 0.0;
    for (int i = 0; i < draws; ++i) {
      c += std::cos(std::arg(haar_unitary(3, rng)(0, 0)));
    }
    CHECK(std::abs(c / draws) < 4.0 / std::sqrt(2.0 * draws));
  }
}

TEST_CASE("coe_matrix") {
  SUBCASE("r = 0 gives the zero matrix") {
    RandomStream rng(1);
    const auto b = coe_matrix({0.0, 3}, rng);
    for (const auto& z : b.entries()) {
      CHECK(z == Complex(0.0, 0.0));
    }
  }
  SUBCASE("exactly symmetric") {
    RandomStream rng(2);
    const auto b = coe_matrix({1.0, 6}, rng);
    CHECK(b.symmetric());
    for (std::size_t i = 0; i < 6; ++i) {
      for (std::size_t j = 0; j < 6; ++j) {
        CHECK(b(i, j) == b(j, i));
      }
    }
  }
  SUBCASE("flat singular values at tanh r") {
    for (std::size_t n = 1; n <= 16; ++n) {
      for (double r : {0.5, 1.0}) {
        RandomStream rng(1000 + n);
        const auto b = coe_matrix({r, n}, rng);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(b));
        const auto s = svd.singularValues();
        for (Eigen::Index i = 0; i < s.size(); ++i) {
          CHECK(std::abs(s(i) - std::tanh(r)) < 1e-9);
        }
      }
    }
  }
  SUBCASE("negative r is rejected") {
    RandomStream rng(2);
    CHECK_THROWS_AS(coe_matrix({-0.1, 3}, rng), InvalidArgument);
    CHECK_THROWS_AS(coe_matrix({1.0, 0}, rng), InvalidArgument);
  }
}

TEST_CASE("gaussian_symmetric") {
  SUBCASE("zero mean") {
    RandomStream rng(4);
    const int draws = 100000;
    Complex sum = 0.0;
    for (int i = 0; i < draws; ++i) {
      sum += gaussian_symmetric(4, 1.0, rng)(1, 2);
    }
    CHECK(std::abs(sum / static_cast<double>(draws)) < 0.02);
  }
  SUBCASE("E|X01|^2 = sigma^2") {
    RandomStream rng(5);
    const int draws = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < draws; ++i) {
      const double a = std::norm(gaussian_symmetric(2, 1.0, rng)(0, 1));
      sum += a;
      sum2 += a * a;
    }
    const double mean = sum / draws;
    const double se = std::sqrt((sum2 / draws - mean * mean) / draws);
    CHECK(std::abs(mean - 1.0) < 3 * se);
  }
  SUBCASE("exactly symmetric") {
    RandomStream rng(6);
    const auto x = gaussian_symmetric(6, 0.3, rng);
    CHECK(x.symmetric());
    CHECK(x == x.transpose());
  }
  SUBCASE("Kolmogorov-Smirnov on the real part") {
    RandomStream rng(7);
    const int draws = 100000;
    std::vector<double> xs(draws);
    for (auto& x : xs) {
      x = gaussian_symmetric(2, 1.0, rng)(0, 1).real();
    }
    std::sort(xs.begin(), xs.end());
    double d = 0.0;
    for (int i = 0; i < draws; ++i) {
      const double f = normal_cdf(xs[i], 0.5);
      d = std::max({d, std::abs(f - static_cast<double>(i) / draws), std::abs(static_cast<double>(i + 1) / draws - f)});
    }
    // Asymptotic critical value at significance 0.001.
    CHECK(d < 1.9495 / std::sqrt(static_cast<double>(draws)));
  }
  SUBCASE("invalid arguments") {
    RandomStream rng(8);
    CHECK_THROWS_AS(gaussian_symmetric(3, 1.0, rng), InvalidArgument);
    CHECK_THROWS_AS(gaussian_symmetric(4, 0.0, rng), InvalidArgument);
  }
}

TEST_CASE("submatrix") {
  std::vector<Complex> e(16);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      e[i * 4 + j] = Complex(10 * i + j, 0);
    }
  }
  const ComplexMatrix b(4, e);

  SUBCASE("index arithmetic") {
    const auto s = submatrix(b, PhotonPattern::from_bitstring("1010"));
    REQUIRE(s.dim() == 2);
    CHECK(s(0, 0) == Complex(0, 0));
    CHECK(s(0, 1) == Complex(2, 0));
    CHECK(s(1, 0) == Complex(20, 0));
    CHECK(s(1, 1) == Complex(22, 0));
  }
  SUBCASE("all ones gives B, k = 0 gives the empty matrix") {
    CHECK(submatrix(b, PhotonPattern::from_bitstring("1111")) == b);
    CHECK(submatrix(b, PhotonPattern::from_bitstring("0000")).dim() == 0);
  }
  SUBCASE("idempotent under the all-ones pattern") {
    const auto s = submatrix(b, PhotonPattern::from_bitstring("0111"));
    CHECK(submatrix(s, PhotonPattern::from_bitstring("111")) == s);
  }
  SUBCASE("symmetry flag is preserved") {
    RandomStream rng(3);
    const auto c = coe_matrix({1.0, 5}, rng);
    CHECK(submatrix(c, PhotonPattern::from_bitstring("10110")).symmetric());
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS_AS(submatrix(b, PhotonPattern::from_bitstring("101")), InvalidArgument);
  }
}

TEST_CASE("pattern enumeration, rank and unrank") {
  const auto all = enumerate_patterns(6, 3);
  REQUIRE(all.size() == 20);
  CHECK(all.front().bitstring() == "000111");
  CHECK(all.back().bitstring() == "111000");
  CHECK(std::is_sorted(all.begin(), all.end()));
  CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK(rank_pattern(all[i]) == i);
    CHECK(unrank_pattern(6, 3, i) == all[i]);
    CHECK(all[i].count() == 3);
  }
  CHECK(enumerate_patterns(4, 0).size() == 1);
  CHECK(enumerate_patterns(4, 0)[0].bitstring() == "0000");
  CHECK(enumerate_patterns(4, 2).size() == 6);
  CHECK_THROWS_AS(enumerate_patterns(30, 10, 1000), ResourceLimit);
  CHECK_THROWS_AS(unrank_pattern(6, 3, 20), InvalidArgument);
}

TEST_CASE("binomial coefficients") {
  CHECK(binomial(30, 10) == 30045015u);
  CHECK(binomial(5, 7) == 0u);
  CHECK(binomial(64, 32) == 1832624140942590534ull);
  CHECK_THROWS_AS(binomial(100, 50), ResourceLimit);
  CHECK(binomial_saturating(100, 50) == std::numeric_limits<std::uint64_t>::max());
  CHECK(std::abs(log_binomial(30.0, 10) - std::log(30045015.0)) < 1e-12);
}
