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

#ifndef GBSOPT_GBS_HPP
#define GBSOPT_GBS_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "gbsopt/matrix.hpp"
#include "gbsopt/pattern.hpp"
#include "gbsopt/random.hpp"

namespace gbsopt {

/// Probability that n equally squeezed modes emit exactly k photons in
/// total: C((n+k)/2 - 1, k/2) sech(r)^n tanh(r)^k. k must be even.
double q_probability(std::size_t n, double r, int k);

/// GBS output law restricted to collision-free patterns with k photons.
///
/// Holds one weight |Haf(B_S)|^2 per pattern of Gamma_{n,k} in
/// lexicographic order, plus the normalized cumulative table used for
/// inverse-CDF sampling. Patterns are reconstructed from their index.
class ConditionalGBSDistribution {
 public:
  /// Builds the table from raw weights (lexicographic order, C(n,k) of
  /// them). r may be NaN when unknown; q and p_valid are then NaN too.
  static ConditionalGBSDistribution from_weights(std::size_t n, std::size_t k, double r,
                                                 std::vector<double> weights);

  std::size_t n() const { return n_; }
  std::size_t k() const { return k_; }
  double r() const { return r_; }
  std::size_t size() const { return weights_.size(); }

  PhotonPattern pattern(std::size_t index) const { return unrank_pattern(n_, k_, index); }
  std::vector<PhotonPattern> patterns() const;

  std::span<const double> weights() const { return weights_; }
  std::span<const double> cumulative() const { return cumulative_; }
  double probability(std::size_t index) const { return weights_[index] / total_weight_; }
  std::vector<double> probabilities() const;
  double total_weight() const { return total_weight_; }

  /// q_{n,r}(k).
  double q() const { return q_; }
  /// Share of the k-photon mass that is collision-free, clamped to [0,1].
  /// Diagnostic only; sampling never uses it.
  double p_valid() const { return p_valid_; }

  /// Mean weight, the expected |Haf|^2 of a uniformly drawn pattern.
  double mu_uniform() const;
  /// sum w^2 / sum w, the expected |Haf|^2 of a GBS-drawn pattern.
  double mu_gbs() const;

  /// Index of the most probable pattern (lexicographically smallest on ties).
  std::size_t argmax() const;

  /// Inverse-CDF draw of a pattern index.
  std::size_t sample_index(RandomStream& rng) const;

 private:
  ConditionalGBSDistribution() = default;

  std::size_t n_ = 0;
  std::size_t k_ = 0;
  double r_ = 0.0;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
  double total_weight_ = 0.0;
  double q_ = 0.0;
  double p_valid_ = 0.0;
  std::size_t last_positive_ = 0;
};

/// weights[i] = |Haf(B_{S_i})|^2 over Gamma_{n,k}. B must carry the
/// symmetric flag and k must be even. Hafnians are evaluated on up to
/// `threads` workers (0 = hardware concurrency); results do not depend on
/// the thread count.
ConditionalGBSDistribution build_conditional_distribution(
    const ComplexMatrix& b, std::size_t k, double r,
    std::uint64_t limit = kDefaultPatternLimit, unsigned threads = 0);

/// GBS-Explore: a pattern drawn from the conditional law.
PhotonPattern gbs_explore(const ConditionalGBSDistribution& dist, RandomStream& rng);

/// A uniformly random pattern of Gamma_{n,k}.
PhotonPattern uniform_explore(std::size_t n, std::size_t k, RandomStream& rng);

/// Tweak parameters: at least ell of the k ones are kept.
struct TweakParams {
  std::size_t ell = 0;
  std::size_t k = 0;

  /// ell even, ell <= k - 2, and ell >= k - ell so that a draw from the
  /// ell-photon law always has enough ones to fill the gap.
  void validate() const;
};

inline constexpr std::size_t kDefaultTweakRetries = 10'000;

/// GBS-Tweak. Keeps ell + L of S's ones (L uniform in [0, k-ell-1]), then
/// fills the remaining k - ell - L slots with ones picked at random from a
/// draw of dist_ell, redrawing while they collide with the kept ones.
/// Throws TweakFailure after max_retries collisions.
PhotonPattern gbs_tweak(const PhotonPattern& s, const TweakParams& params,
                        const ConditionalGBSDistribution& dist_ell, RandomStream& rng,
                        std::size_t max_retries = kDefaultTweakRetries);

/// Same first step as gbs_tweak; the new ones are chosen uniformly from the
/// zero positions of the kept pattern. Requires k < n.
PhotonPattern uniform_tweak(const PhotonPattern& s, const TweakParams& params, RandomStream& rng);

struct AdvantageDiagnostics {
  double mu_u = 0.0;
  double mu_gbs = 0.0;
  double ratio = 0.0;
};

/// mu_u = mean(w), mu_gbs = sum w^2 / sum w, ratio = mu_gbs / mu_u >= 1.
AdvantageDiagnostics advantage_diagnostics(std::span<const double> weights);
AdvantageDiagnostics gbs_advantage_diagnostics(const ConditionalGBSDistribution& dist);

/// CSV with header "pattern,weight,probability", one row per pattern in
/// lexicographic order.
void write_distribution_csv(const ConditionalGBSDistribution& dist, std::ostream& out);

/// Reads a table written by write_distribution_csv. The pattern column must
/// be complete and in lexicographic order.
ConditionalGBSDistribution read_distribution_csv(std::istream& in);

}  // namespace gbsopt

#endif  // GBSOPT_GBS_HPP
