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

#ifndef GBSOPT_MATRIX_HPP
#define GBSOPT_MATRIX_HPP

#include <complex>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include <json.hpp>

namespace gbsopt {

using Complex = std::complex<double>;

/// Dense square complex matrix, row-major, immutable after construction.
///
/// When the symmetric flag is set the lower triangle is a bit-exact mirror
/// of the upper triangle; the constructor enforces this by copying the upper
/// triangle down, so callers may leave the lower half unset.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  /// dim x dim zero matrix.
  explicit ComplexMatrix(std::size_t dim, bool symmetric = false);

  /// Takes ownership of dim*dim row-major entries.
  ComplexMatrix(std::size_t dim, std::vector<Complex> entries, bool symmetric = false);

  static ComplexMatrix identity(std::size_t dim);

  std::size_t dim() const { return dim_; }
  bool symmetric() const { return symmetric_; }

  const Complex& operator()(std::size_t row, std::size_t col) const {
    return entries_[row * dim_ + col];
  }

  std::span<const Complex> entries() const { return entries_; }

  ComplexMatrix scaled(Complex factor) const;
  ComplexMatrix transpose() const;
  ComplexMatrix adjoint() const;

  /// Largest |a_ij - b_ij|. Dimensions must agree.
  static double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  /// Bit-exact entry comparison (including the symmetric flag).
  friend bool operator==(const ComplexMatrix& a, const ComplexMatrix& b);

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> entries_;
  bool symmetric_ = false;
};

/// {dim, symmetric, entries: [[re, im], ...]} in row-major order.
nlohmann::json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

void save_matrix(const ComplexMatrix& m, const std::filesystem::path& path);
ComplexMatrix load_matrix(const std::filesystem::path& path);

}  // namespace gbsopt

#endif  // GBSOPT_MATRIX_HPP
