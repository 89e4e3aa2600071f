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

#include "gbsopt/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "gbsopt/errors.hpp"

namespace gbsopt {

ComplexMatrix::ComplexMatrix(std::size_t dim, bool symmetric)
    : dim_(dim), entries_(dim * dim), symmetric_(symmetric) {}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries, bool symmetric)
    : dim_(dim), entries_(std::move(entries)), symmetric_(symmetric) {
  if (entries_.size() != dim_ * dim_) {
    throw InvalidArgument("ComplexMatrix: expected " + std::to_string(dim_ * dim_) +
                          " entries, got " + std::to_string(entries_.size()));
  }
  if (symmetric_) {
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = i + 1; j < dim_; ++j) {
        entries_[j * dim_ + i] = entries_[i * dim_ + j];
      }
    }
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  std::vector<Complex> e(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) {
    e[i * dim + i] = 1.0;
  }
  return ComplexMatrix(dim, std::move(e), true);
}

ComplexMatrix ComplexMatrix::scaled(Complex factor) const {
  std::vector<Complex> e(entries_);
  for (auto& z : e) {
    z *= factor;
  }
  return ComplexMatrix(dim_, std::move(e), symmetric_);
}

ComplexMatrix ComplexMatrix::transpose() const {
  std::vector<Complex> e(entries_.size());
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      e[j * dim_ + i] = entries_[i * dim_ + j];
    }
  }
  return ComplexMatrix(dim_, std::move(e), symmetric_);
}

ComplexMatrix ComplexMatrix::adjoint() const {
  std::vector<Complex> e(entries_.size());
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      e[j * dim_ + i] = std::conj(entries_[i * dim_ + j]);
    }
  }
  return ComplexMatrix(dim_, std::move(e), symmetric_);
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim_ != b.dim_) {
    throw InvalidArgument("max_abs_diff: dimension mismatch");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.entries_.size(); ++i) {
    worst = std::max(worst, std::abs(a.entries_[i] - b.entries_[i]));
  }
  return worst;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim_ != b.dim_) {
    throw InvalidArgument("matrix product: dimension mismatch");
  }
  const std::size_t n = a.dim_;
  std::vector<Complex> e(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < n; ++l) {
      const Complex ail = a.entries_[i * n + l];
      for (std::size_t j = 0; j < n; ++j) {
        e[i * n + j] += ail * b.entries_[l * n + j];
      }
    }
  }
  return ComplexMatrix(n, std::move(e), false);
}

bool operator==(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.dim_ == b.dim_ && a.symmetric_ == b.symmetric_ && a.entries_ == b.entries_;
}

nlohmann::json to_json(const ComplexMatrix& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (const Complex& z : m.entries()) {
    entries.push_back({z.real(), z.imag()});
  }
  return {{"dim", m.dim()}, {"symmetric", m.symmetric()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  try {
    const auto dim = j.at("dim").get<std::size_t>();
    const bool symmetric = j.value("symmetric", false);
    const auto& raw = j.at("entries");
    if (!raw.is_array() || raw.size() != dim * dim) {
      throw InvalidArgument("matrix JSON: entries must hold dim*dim [re, im] pairs");
    }
    std::vector<Complex> entries;
    entries.reserve(raw.size());
    for (const auto& z : raw) {
      if (!z.is_array() || z.size() != 2) {
        throw InvalidArgument("matrix JSON: each entry must be [re, im]");
      }
      entries.emplace_back(z[0].get<double>(), z[1].get<double>());
    }
    if (symmetric) {
      for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = r + 1; c < dim; ++c) {
          if (entries[r * dim + c] != entries[c * dim + r]) {
            throw InvalidArgument("matrix JSON: flagged symmetric but entries differ");
          }
        }
      }
    }
    return ComplexMatrix(dim, std::move(entries), symmetric);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("matrix JSON: ") + e.what());
  }
}

void save_matrix(const ComplexMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << to_json(m).dump() << '\n';
}

ComplexMatrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InvalidArgument("cannot read matrix file " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("matrix file " + path.string() + ": " + e.what());
  }
  return matrix_from_json(j);
}

}  // namespace gbsopt
