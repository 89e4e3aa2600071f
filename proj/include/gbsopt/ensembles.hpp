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

#ifndef GBSOPT_ENSEMBLES_HPP
#define GBSOPT_ENSEMBLES_HPP

#include <cstddef>

#include "gbsopt/matrix.hpp"
#include "gbsopt/random.hpp"

namespace gbsopt {

/// Equal squeezing r on each of n modes.
struct SqueezingSpec {
  double r = 1.0;
  std::size_t n = 1;

  void validate() const;
};

/// Haar-distributed n x n unitary.
///
/// Draws a complex Ginibre matrix and orthonormalizes its columns with
/// Gram-Schmidt (two passes). Gram-Schmidt leaves R with a positive real
/// diagonal, which is exactly the phase fix that makes Q Haar rather than
/// merely unitary.
ComplexMatrix haar_unitary(std::size_t n, RandomStream& rng);

/// B = tanh(r) U U^T with U Haar; symmetric, all singular values tanh(r).
ComplexMatrix coe_matrix(const SqueezingSpec& spec, RandomStream& rng);

/// k x k symmetric matrix whose upper triangle (diagonal included) is i.i.d.
/// circular complex normal with E|z|^2 = sigma^2.
ComplexMatrix gaussian_symmetric(std::size_t k, double sigma, RandomStream& rng);

}  // namespace gbsopt

#endif  // GBSOPT_ENSEMBLES_HPP
