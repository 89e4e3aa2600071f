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

#include "gbsopt/optimizers.hpp"

#include <algorithm>
#include <cmath>

#include "gbsopt/errors.hpp"
#include "gbsopt/hafnian.hpp"

namespace gbsopt {

namespace {

void note_value(OptimizerRun& run, const ObjectiveOracle& oracle, const PhotonPattern& s, double value) {
  if (run.trajectory.empty() || value > run.best_value) {
    run.best_value = value;
    run.best_pattern = s;
    run.trajectory.emplace_back(oracle.eval_count(), value);
  }
}

}  // namespace

ObjectiveOracle::ObjectiveOracle(const ComplexMatrix& b, bool use_cache) : b_(&b), use_cache_(use_cache) {}

double ObjectiveOracle::operator()(const PhotonPattern& s) {
  if (s.size() != b_->dim()) {
    throw InvalidArgument("objective: pattern length does not match the matrix");
  }
  if (use_cache_) {
    const std::vector<std::uint8_t> key(s.bits().begin(), s.bits().end());
    if (auto it = cache_.find(key); it != cache_.end()) {
      return it->second;
    }
    const double v = std::abs(hafnian_of_indices(*b_, s.ones()));
    ++eval_count_;
    cache_.emplace(key, v);
    return v;
  }
  ++eval_count_;
  return std::abs(hafnian_of_indices(*b_, s.ones()));
}

double OptimizerRun::best_after(std::size_t evals) const {
  double best = 0.0;
  for (const auto& [e, v] : trajectory) {
    if (e > evals) {
      break;
    }
    best = v;
  }
  return best;
}

nlohmann::json to_json(const OptimizerRun& run) {
  nlohmann::json traj = nlohmann::json::array();
  for (const auto& [e, v] : run.trajectory) {
    traj.push_back({e, v});
  }
  return {{"algorithm", run.algorithm},
          {"sampler", run.sampler},
          {"seed", run.seed},
          {"config", run.config},
          {"trajectory", std::move(traj)},
          {"best_pattern", run.best_pattern.bitstring()},
          {"best_value", run.best_value},
          {"evaluations", run.evaluations},
          {"tweak_fallbacks", run.tweak_fallbacks}};
}

Explorer Explorer::gbs(const ConditionalGBSDistribution& dist) {
  Explorer e;
  e.dist_ = &dist;
  e.n_ = dist.n();
  e.k_ = dist.k();
  return e;
}

Explorer Explorer::uniform(std::size_t n, std::size_t k) {
  if (k > n) {
    throw InvalidArgument("Explorer: k exceeds n");
  }
  Explorer e;
  e.n_ = n;
  e.k_ = k;
  return e;
}

PhotonPattern Explorer::draw(RandomStream& rng) const {
  return dist_ ? gbs_explore(*dist_, rng) : uniform_explore(n_, k_, rng);
}

Tweaker Tweaker::gbs(const ConditionalGBSDistribution& dist_ell, TweakParams params, std::size_t max_retries) {
  params.validate();
  if (dist_ell.k() != params.ell) {
    throw InvalidArgument("Tweaker: distribution photon number must equal ell");
  }
  Tweaker t;
  t.dist_ = &dist_ell;
  t.params_ = params;
  t.max_retries_ = max_retries;
  return t;
}

Tweaker Tweaker::uniform(TweakParams params) {
  params.validate();
  Tweaker t;
  t.params_ = params;
  return t;
}

PhotonPattern Tweaker::tweak(const PhotonPattern& s, RandomStream& rng, std::size_t* fallbacks) const {
  if (!dist_) {
    return uniform_tweak(s, params_, rng);
  }
  try {
    return gbs_tweak(s, params_, *dist_, rng, max_retries_);
  } catch (const TweakFailure&) {
    if (fallbacks) {
      ++*fallbacks;
    }
    return uniform_tweak(s, params_, rng);
  }
}

void AnnealSchedule::validate() const {
  if (!(t0 > 0.0) || !std::isfinite(t0)) {
    throw InvalidArgument("AnnealSchedule: t0 must be positive and finite");
  }
  if (steps < 1) {
    throw InvalidArgument("AnnealSchedule: steps must be at least 1");
  }
}

double AnnealSchedule::temperature(std::size_t step) const {
  if (step >= steps) {
    return 0.0;
  }
  return t0 * (1.0 - static_cast<double>(step) / static_cast<double>(steps));
}

BruteForceResult brute_force_maxhaf(const ComplexMatrix& b, std::size_t k, std::uint64_t limit) {
  if (k > b.dim()) {
    throw InvalidArgument("brute_force_maxhaf: k exceeds n");
  }
  const std::uint64_t total = binomial_saturating(b.dim(), k);
  if (total > limit) {
    throw ResourceLimit("brute_force_maxhaf: C(" + std::to_string(b.dim()) + ", " + std::to_string(k) +
                        ") patterns exceeds the limit of " + std::to_string(limit));
  }
  BruteForceResult best;
  bool first = true;
  std::vector<std::size_t> idx;
  idx.reserve(k);
  for_each_pattern(b.dim(), k, [&](std::span<const std::uint8_t> bits, std::uint64_t) {
    idx.clear();
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i]) {
        idx.push_back(i);
      }
    }
    const Complex h = hafnian_of_indices(b, idx);
    const double v = std::abs(h);
    if (first || v > best.value) {
      first = false;
      best.value = v;
      best.value_squared = std::norm(h);
      best.pattern = PhotonPattern(std::vector<std::uint8_t>(bits.begin(), bits.end()));
    }
  });
  return best;
}

BruteForceResult brute_force_from_distribution(const ConditionalGBSDistribution& dist) {
  const std::size_t i = dist.argmax();
  BruteForceResult r;
  r.pattern = dist.pattern(i);
  r.value_squared = dist.weights()[i];
  r.value = std::sqrt(r.value_squared);
  return r;
}

OptimizerRun random_search(ObjectiveOracle& oracle, std::size_t k, std::size_t budget,
                           const Explorer& explorer, RandomStream& rng) {
  if (budget < 1) {
    throw InvalidArgument("random_search: budget must be at least 1");
  }
  if (explorer.k() != k) {
    throw InvalidArgument("random_search: explorer photon number differs from k");
  }
  OptimizerRun run;
  run.algorithm = "random-search";
  run.sampler = explorer.name();
  run.seed = rng.seed();
  run.config = {{"k", k}, {"budget", budget}};
  for (std::size_t i = 0; i < budget; ++i) {
    const PhotonPattern s = explorer.draw(rng);
    note_value(run, oracle, s, oracle(s));
  }
  run.evaluations = oracle.eval_count();
  return run;
}

OptimizerRun simulated_annealing(ObjectiveOracle& oracle, std::size_t k, const AnnealSchedule& sched,
                                 const Tweaker& tweaker, const Explorer& explorer, RandomStream& rng,
                                 std::vector<AnnealStep>* trace) {
  sched.validate();
  if (explorer.k() != k || tweaker.params().k != k) {
    throw InvalidArgument("simulated_annealing: explorer/tweaker photon number differs from k");
  }
  OptimizerRun run;
  run.algorithm = "annealing";
  run.sampler = explorer.name();
  run.seed = rng.seed();
  run.config = {{"k", k},
                {"ell", tweaker.params().ell},
                {"t0", sched.t0},
                {"steps", sched.steps},
                {"tweaker", tweaker.name()}};

  PhotonPattern current = explorer.draw(rng);
  double current_value = oracle(current);
  note_value(run, oracle, current, current_value);

  for (std::size_t step = 1; step <= sched.steps; ++step) {
    PhotonPattern proposal = tweaker.tweak(current, rng, &run.tweak_fallbacks);
    const double proposal_value = oracle(proposal);
    const double t = sched.temperature(step);
    bool accept = proposal_value > current_value;
    if (!accept && t > 0.0) {
      accept = rng.uniform() < std::exp((proposal_value - current_value) / t);
    }
    if (trace) {
      trace->push_back({step, t, current_value, proposal_value, accept});
    }
    if (accept) {
      current = std::move(proposal);
      current_value = proposal_value;
    }
    note_value(run, oracle, current, current_value);
  }
  run.evaluations = oracle.eval_count();
  return run;
}

std::size_t greedy_evaluations_per_repetition(std::size_t n, std::size_t k) {
  return 1 + k * (n - k + 1);
}

std::size_t greedy_repetitions_for_budget(std::size_t n, std::size_t k, std::size_t budget) {
  const double per = static_cast<double>(greedy_evaluations_per_repetition(n, k));
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(static_cast<double>(budget) / per)));
}

OptimizerRun greedy(ObjectiveOracle& oracle, std::size_t k, std::size_t repetitions,
                    const Explorer& explorer, RandomStream& rng) {
  if (repetitions < 1) {
    throw InvalidArgument("greedy: repetitions must be at least 1");
  }
  if (explorer.k() != k) {
    throw InvalidArgument("greedy: explorer photon number differs from k");
  }
  const std::size_t n = oracle.n();
  OptimizerRun run;
  run.algorithm = "greedy";
  run.sampler = explorer.name();
  run.seed = rng.seed();
  run.config = {{"k", k}, {"repetitions", repetitions}};

  for (std::size_t rep = 0; rep < repetitions; ++rep) {
    const PhotonPattern start = explorer.draw(rng);
    std::vector<std::size_t> slots = start.ones();
    std::vector<std::uint8_t> in_use(start.bits().begin(), start.bits().end());
    note_value(run, oracle, start, oracle(start));

    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t incumbent = slots[i];
      std::size_t best_j = incumbent;
      double best_v = -1.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (in_use[j] && j != incumbent) {
          continue;
        }
        std::vector<std::uint8_t> bits = in_use;
        bits[incumbent] = 0;
        bits[j] = 1;
        PhotonPattern candidate(std::move(bits));
        const double v = oracle(candidate);
        note_value(run, oracle, candidate, v);
        if (v > best_v) {
          best_v = v;
          best_j = j;
        }
      }
      in_use[incumbent] = 0;
      in_use[best_j] = 1;
      slots[i] = best_j;
    }
  }
  run.evaluations = oracle.eval_count();
  return run;
}

std::size_t max_clique_via_maxhaf(const ComplexMatrix& adjacency, std::uint64_t limit) {
  const std::size_t n = adjacency.dim();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Complex a = adjacency(i, j);
      const bool ok = a.imag() == 0.0 && (a.real() == 0.0 || a.real() == 1.0) &&
                      a == adjacency(j, i) && (i != j || a.real() == 0.0);
      if (!ok) {
        throw InvalidArgument("max_clique_via_maxhaf: need a symmetric 0/1 matrix with zero diagonal");
      }
    }
  }
  for (std::size_t k = n - n % 2; k >= 2; k -= 2) {
    const BruteForceResult best = brute_force_maxhaf(adjacency, k, limit);
    const double clique = static_cast<double>(double_factorial(static_cast<int>(k) - 1));
    const double target = clique * clique;
    if (std::abs(best.value_squared - target) <= 1e-9 * target) {
      return k;
    }
  }
  return 0;
}

}  // namespace gbsopt
