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

#ifndef GBSOPT_EXPERIMENT_HPP
#define GBSOPT_EXPERIMENT_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gbsopt/matrix.hpp"
#include "gbsopt/optimizers.hpp"

namespace gbsopt {

/// Largest C(n, k) accepted without long_mode.
inline constexpr std::uint64_t kDeskPatternLimit = 1'000'000;

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "GBSOPT_OUTPUT_DIR";

struct ExperimentConfig {
  std::size_t n = 12;
  std::size_t k = 4;
  double r = 1.0;
  std::string algorithm = "random-search";  ///< random-search | annealing | greedy
  std::string sampler = "gbs";              ///< gbs | uniform
  std::string tweaker;                      ///< gbs | uniform; empty means "same as sampler"
  std::size_t budget = 200;
  std::size_t repetitions = 100;
  std::size_t ell = 2;
  double t0 = 1e-3;
  std::uint64_t seed = 0;
  std::optional<std::string> matrix_path;
  std::optional<std::string> output_dir;
  bool long_mode = false;
  bool save_runs = false;
  unsigned threads = 0;  ///< 0 = hardware concurrency; never changes results

  /// Parses and validates; unknown keys and wrong types are InvalidArgument.
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::filesystem::path& path);

  /// n=30, k=10, ell=6, t0=3e-5, 1000 evaluations, 400 repetitions.
  static ExperimentConfig paper_scale();
  /// Switches problem and algorithm parameters to the paper protocol,
  /// keeping algorithm, sampler, tweaker, seed and paths.
  void apply_paper_scale();

  std::string effective_tweaker() const { return tweaker.empty() ? sampler : tweaker; }
  void validate() const;
  nlohmann::json to_json() const;
};

/// A named table of numeric columns plus metadata.
struct FigureDataset {
  std::string id;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::json metadata = nlohmann::json::object();
  /// Optional per-repetition run records, written beside the CSV.
  nlohmann::json runs;

  /// RFC-4180 CSV, LF line endings, shortest round-trip numbers.
  std::string to_csv() const;
};

/// Git blob hash: SHA-1 of "blob <size>\0" followed by the bytes, in hex.
std::string git_blob_sha1(std::string_view content);

/// Writes <dir>/<id>.csv and <dir>/<id>.meta.json (plus <id>.runs.json when
/// runs are present). The metadata gains "content_hash" of the CSV bytes.
/// Returns the CSV path.
std::filesystem::path write_dataset(const FigureDataset& ds, const std::filesystem::path& dir);

struct VerifyResult {
  bool ok = false;
  std::string expected;
  std::string actual;
};

/// Re-derives the content hash of a CSV and compares it with the one
/// recorded in its .meta.json.
VerifyResult verify_dataset(const std::filesystem::path& csv_path);

/// flag > config > GBSOPT_OUTPUT_DIR > current directory.
std::filesystem::path resolve_output_dir(const std::optional<std::string>& flag,
                                         const std::optional<std::string>& config_value);

/// The instance for a config: loaded from matrix_path, else a COE draw from
/// RandomStream(seed).
ComplexMatrix experiment_matrix(const ExperimentConfig& config);

/// Runs config.repetitions independent optimizer runs (repetition i uses
/// RandomStream(seed).substream(i + 1)) and reports mean, std and stderr of
/// the best-so-far |Haf| at every evaluation count.
FigureDataset run_experiment(const ExperimentConfig& config);

/// The same for all six (algorithm, sampler) pairs on one instance; annealing
/// uses the sampler as its tweaker. Shorter curves carry their final value
/// forward to the longest evaluation count.
FigureDataset emit_figure4(const ExperimentConfig& config);

/// Density of the uniform law and of the exponential family at y = i/grid.
FigureDataset emit_figure1(const std::vector<double>& lambdas, std::size_t grid);

/// alpha coefficients for kappa = 1..kappa_max.
FigureDataset emit_figure2(const std::vector<double>& lambdas, std::size_t kappa_max);

/// R(k^2, k) for even k = 2..k_max.
FigureDataset emit_figure3(std::size_t k_max);

}  // namespace gbsopt

#endif  // GBSOPT_EXPERIMENT_HPP
