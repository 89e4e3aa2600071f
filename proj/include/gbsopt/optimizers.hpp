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

#ifndef GBSOPT_OPTIMIZERS_HPP
#define GBSOPT_OPTIMIZERS_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gbsopt/gbs.hpp"
#include "gbsopt/matrix.hpp"
#include "gbsopt/pattern.hpp"
#include "gbsopt/random.hpp"

namespace gbsopt {

/// Max-Haf objective S -> |Haf(B_S)| with an evaluation counter.
///
/// Every call counts as one evaluation unless the optional memo is enabled,
/// in which case repeated patterns are served from the memo for free.
class ObjectiveOracle {
 public:
  explicit ObjectiveOracle(const ComplexMatrix& b, bool use_cache = false);

  double operator()(const PhotonPattern& s);

  std::size_t eval_count() const { return eval_count_; }
  const ComplexMatrix& matrix() const { return *b_; }
  std::size_t n() const { return b_->dim(); }

 private:
  const ComplexMatrix* b_;
  bool use_cache_;
  std::size_t eval_count_ = 0;
  std::map<std::vector<std::uint8_t>, double> cache_;
};

struct OptimizerRun {
  std::string algorithm;
  std::string sampler;
  std::uint64_t seed = 0;
  nlohmann::json config;
  /// (evaluations so far, best |Haf| so far), one entry per improvement.
  std::vector<std::pair<std::size_t, double>> trajectory;
  PhotonPattern best_pattern;
  double best_value = 0.0;
  std::size_t evaluations = 0;
  /// GBS tweaks that hit the redraw budget and fell back to a uniform tweak.
  std::size_t tweak_fallbacks = 0;

  /// Best value after `evals` evaluations (0 before the first).
  double best_after(std::size_t evals) const;
};

nlohmann::json to_json(const OptimizerRun& run);

/// Source of exploration samples: GBS-Explore on a prebuilt conditional
/// law, or uniform over Gamma_{n,k}. Holds a non-owning pointer to the
/// distribution.
class Explorer {
 public:
  static Explorer gbs(const ConditionalGBSDistribution& dist);
  static Explorer uniform(std::size_t n, std::size_t k);

  PhotonPattern draw(RandomStream& rng) const;
  std::string name() const { return dist_ ? "gbs" : "uniform"; }
  std::size_t k() const { return k_; }

 private:
  const ConditionalGBSDistribution* dist_ = nullptr;
  std::size_t n_ = 0;
  std::size_t k_ = 0;
};

/// GBS-Tweak (with uniform fallback on redraw exhaustion) or uniform tweak.
class Tweaker {
 public:
  static Tweaker gbs(const ConditionalGBSDistribution& dist_ell, TweakParams params,
                     std::size_t max_retries = kDefaultTweakRetries);
  static Tweaker uniform(TweakParams params);

  /// Increments *fallbacks when a GBS tweak had to fall back.
  PhotonPattern tweak(const PhotonPattern& s, RandomStream& rng, std::size_t* fallbacks) const;
  std::string name() const { return dist_ ? "gbs" : "uniform"; }
  const TweakParams& params() const { return params_; }

 private:
  const ConditionalGBSDistribution* dist_ = nullptr;
  TweakParams params_;
  std::size_t max_retries_ = kDefaultTweakRetries;
};

/// Linear cooling: t(a) = t0 (1 - a / steps) for a = 1..steps, reaching 0 on
/// the final step.
struct AnnealSchedule {
  double t0 = 1.0;
  std::size_t steps = 1;

  void validate() const;
  double temperature(std::size_t step) const;
};

struct BruteForceResult {
  PhotonPattern pattern;
  double value = 0.0;          ///< |Haf|
  double value_squared = 0.0;  ///< |Haf|^2
};

/// Exhaustive argmax of |Haf(B_S)| over Gamma_{n,k}; lexicographically
/// smallest pattern on ties.
BruteForceResult brute_force_maxhaf(const ComplexMatrix& b, std::size_t k,
                                    std::uint64_t limit = kDefaultPatternLimit);

/// Same optimum read off an already built conditional distribution.
BruteForceResult brute_force_from_distribution(const ConditionalGBSDistribution& dist);

OptimizerRun random_search(ObjectiveOracle& oracle, std::size_t k, std::size_t budget,
                           const Explorer& explorer, RandomStream& rng);

/// One annealing step as seen by the acceptance rule.
struct AnnealStep {
  std::size_t step = 0;
  double temperature = 0.0;
  double current_value = 0.0;   ///< |Haf| of the incumbent before the step
  double proposal_value = 0.0;  ///< |Haf| of the tweaked proposal
  bool accepted = false;
};

/// Simulated annealing: explore once, then `sched.steps` tweak proposals.
/// Improvements are always taken; otherwise the proposal is accepted with
/// probability exp((|Haf R| - |Haf S|) / t), and never at t = 0.
/// When `trace` is given every step is appended to it.
OptimizerRun simulated_annealing(ObjectiveOracle& oracle, std::size_t k, const AnnealSchedule& sched,
                                 const Tweaker& tweaker, const Explorer& explorer, RandomStream& rng,
                                 std::vector<AnnealStep>* trace = nullptr);

/// Greedy coordinate search, restarted `repetitions` times. For each slot i
/// of the current pattern every candidate in {current index} u {unused
/// indices} is evaluated and the best adopted (smallest index on ties).
/// Uses repetitions * (1 + k (n - k + 1)) evaluations.
OptimizerRun greedy(ObjectiveOracle& oracle, std::size_t k, std::size_t repetitions,
                    const Explorer& explorer, RandomStream& rng);

std::size_t greedy_evaluations_per_repetition(std::size_t n, std::size_t k);

/// Repetitions that best fit an evaluation budget: round(budget / (1 + k (n - k + 1))),
/// at least 1. Gives 5 for n=30, k=10 and 1000 evaluations.
std::size_t greedy_repetitions_for_budget(std::size_t n, std::size_t k, std::size_t budget);

/// Largest even k such that some k-subset of the graph attains
/// |Haf| = (k-1)!!, i.e. contains a k-clique. Odd cliques are invisible to
/// the Hafnian, so the clique number is this value or this value + 1.
std::size_t max_clique_via_maxhaf(const ComplexMatrix& adjacency,
                                  std::uint64_t limit = kDefaultPatternLimit);

}  // namespace gbsopt

#endif  // GBSOPT_OPTIMIZERS_HPP
