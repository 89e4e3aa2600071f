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

#include "gbsopt/ensembles.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "gbsopt/errors.hpp"

namespace gbsopt {

void SqueezingSpec::validate() const {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw InvalidArgument("squeezing parameter r must be finite and non-negative");
  }
  if (n < 1) {
    throw InvalidArgument("mode count n must be at least 1");
  }
}

ComplexMatrix haar_unitary(std::size_t n, RandomStream& rng) {
  if (n == 0) {
    throw InvalidArgument("haar_unitary: n must be positive");
  }
  // Column-major working copy: col[j][i] is entry (i, j).
  std::vector<std::vector<Complex>> col(n, std::vector<Complex>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      col[j][i] = rng.complex_normal(1.0);
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    auto& v = col[j];
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t p = 0; p < j; ++p) {
        const auto& q = col[p];
        Complex proj = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          proj += std::conj(q[i]) * v[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
          v[i] -= proj * q[i];
        }
      }
    }
    double norm2 = 0.0;
    for (const Complex& z : v) {
      norm2 += std::norm(z);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (Complex& z : v) {
      z *= inv;
    }
  }
  std::vector<Complex> e(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      e[i * n + j] = col[j][i];
    }
  }
  return ComplexMatrix(n, std::move(e), false);
}

ComplexMatrix coe_matrix(const SqueezingSpec& spec, RandomStream& rng) {
  spec.validate();
  const ComplexMatrix u = haar_unitary(spec.n, rng);
  const std::size_t n = spec.n;
  const double t = std::tanh(spec.r);
  // Only the upper triangle is formed; the constructor mirrors it.
  std::vector<Complex> e(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      Complex acc = 0.0;
      for (std::size_t l = 0; l < n; ++l) {
        acc += u(i, l) * u(j, l);
      }
      e[i * n + j] = t * acc;
    }
  }
  return ComplexMatrix(n, std::move(e), true);
}

ComplexMatrix gaussian_symmetric(std::size_t k, double sigma, RandomStream& rng) {
  if (k < 2 || k % 2 != 0) {
    throw InvalidArgument("gaussian_symmetric: k must be even and at least 2, got " + std::to_string(k));
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument("gaussian_symmetric: sigma must be positive");
  }
  std::vector<Complex> e(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      e[i * k + j] = rng.complex_normal(sigma);
    }
  }
  return ComplexMatrix(k, std::move(e), true);
}

}  // namespace gbsopt
