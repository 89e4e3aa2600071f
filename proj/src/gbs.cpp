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

#include "gbsopt/gbs.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>
#include <thread>

#include "gbsopt/errors.hpp"
#include "gbsopt/format.hpp"
#include "gbsopt/hafnian.hpp"

namespace gbsopt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double log_cosh(double r) {
  const double a = std::abs(r);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

// Moves `count` uniformly chosen elements of v to its front.
void partial_shuffle(std::vector<std::size_t>& v, std::size_t count, RandomStream& rng) {
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(v.size() - i));
    std::swap(v[i], v[j]);
  }
}

// Step 1 shared by both tweaks: the kept ones and how many must be added.
struct KeptOnes {
  std::vector<std::uint8_t> bits;
  std::size_t need = 0;
};

KeptOnes keep_subset(const PhotonPattern& s, const TweakParams& params, RandomStream& rng) {
  params.validate();
  if (s.count() != params.k) {
    throw InvalidArgument("tweak: pattern has " + std::to_string(s.count()) + " ones, expected k = " +
                          std::to_string(params.k));
  }
  const std::size_t extra = static_cast<std::size_t>(rng.below(params.k - params.ell));
  const std::size_t keep = params.ell + extra;
  auto ones = s.ones();
  partial_shuffle(ones, keep, rng);
  KeptOnes out;
  out.bits.assign(s.size(), 0);
  for (std::size_t i = 0; i < keep; ++i) {
    out.bits[ones[i]] = 1;
  }
  out.need = params.k - keep;
  return out;
}

}  // namespace

double q_probability(std::size_t n, double r, int k) {
  if (k < 0 || k % 2 != 0) {
    throw InvalidArgument("q_probability: k must be even and non-negative, got " + std::to_string(k));
  }
  if (n == 0) {
    throw InvalidArgument("q_probability: n must be positive");
  }
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw InvalidArgument("q_probability: r must be finite and non-negative");
  }
  const double nd = static_cast<double>(n);
  double log_q = log_binomial((nd + k) / 2.0 - 1.0, static_cast<std::size_t>(k / 2)) - nd * log_cosh(r);
  if (k > 0) {
    const double t = std::tanh(r);
    if (t == 0.0) {
      return 0.0;
    }
    log_q += k * std::log(t);
  }
  return std::exp(log_q);
}

ConditionalGBSDistribution ConditionalGBSDistribution::from_weights(std::size_t n, std::size_t k,
                                                                    double r,
                                                                    std::vector<double> weights) {
  if (k > n) {
    throw InvalidArgument("conditional distribution: k exceeds n");
  }
  if (weights.size() != binomial_saturating(n, k)) {
    throw InvalidArgument("conditional distribution: expected C(n,k) = " +
                          std::to_string(binomial_saturating(n, k)) + " weights, got " +
                          std::to_string(weights.size()));
  }
  ConditionalGBSDistribution d;
  d.n_ = n;
  d.k_ = k;
  d.r_ = r;
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) {
      throw InvalidArgument("conditional distribution: weights must be finite and non-negative");
    }
    total += weights[i];
    if (weights[i] > 0.0) {
      d.last_positive_ = i;
    }
  }
  if (total == 0.0) {
    throw DegenerateDistribution("conditional distribution: every weight is zero");
  }
  d.weights_ = std::move(weights);
  d.total_weight_ = total;
  d.cumulative_.resize(d.weights_.size());
  double running = 0.0;
  for (std::size_t i = 0; i < d.weights_.size(); ++i) {
    running += d.weights_[i];
    d.cumulative_[i] = running / total;
  }
  if (std::isnan(r) || k % 2 != 0) {
    d.q_ = kNaN;
    d.p_valid_ = kNaN;
  } else {
    d.q_ = q_probability(n, r, static_cast<int>(k));
    if (d.q_ > 0.0) {
      const double log_p = std::log(total) - static_cast<double>(n) * log_cosh(r) - std::log(d.q_);
      d.p_valid_ = std::clamp(std::exp(log_p), 0.0, 1.0);
    } else {
      d.p_valid_ = kNaN;
    }
  }
  return d;
}

std::vector<PhotonPattern> ConditionalGBSDistribution::patterns() const {
  std::vector<PhotonPattern> out;
  out.reserve(size());
  for_each_pattern(n_, k_, [&](std::span<const std::uint8_t> bits, std::uint64_t) {
    out.emplace_back(std::vector<std::uint8_t>(bits.begin(), bits.end()));
  });
  return out;
}

std::vector<double> ConditionalGBSDistribution::probabilities() const {
  std::vector<double> p(weights_.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = weights_[i] / total_weight_;
  }
  return p;
}

double ConditionalGBSDistribution::mu_uniform() const {
  return total_weight_ / static_cast<double>(weights_.size());
}

double ConditionalGBSDistribution::mu_gbs() const {
  double sq = 0.0;
  for (double w : weights_) {
    sq += w * w;
  }
  return sq / total_weight_;
}

std::size_t ConditionalGBSDistribution::argmax() const {
  return static_cast<std::size_t>(std::max_element(weights_.begin(), weights_.end()) - weights_.begin());
}

std::size_t ConditionalGBSDistribution::sample_index(RandomStream& rng) const {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) {
    return last_positive_;
  }
  return static_cast<std::size_t>(it - cumulative_.begin());
}

ConditionalGBSDistribution build_conditional_distribution(const ComplexMatrix& b, std::size_t k,
                                                          double r, std::uint64_t limit,
                                                          unsigned threads) {
  if (!b.symmetric()) {
    throw InvalidArgument("build_conditional_distribution: B must be symmetric");
  }
  if (k % 2 != 0) {
    throw InvalidArgument("build_conditional_distribution: k must be even, got " + std::to_string(k));
  }
  const std::size_t n = b.dim();
  if (k > n) {
    throw InvalidArgument("build_conditional_distribution: k exceeds n");
  }
  const std::uint64_t total = binomial_saturating(n, k);
  if (total > limit) {
    throw ResourceLimit("build_conditional_distribution: C(" + std::to_string(n) + ", " +
                        std::to_string(k) + ") = " + std::to_string(total) +
                        " patterns exceeds the limit of " + std::to_string(limit));
  }
  std::vector<double> weights(total);
  if (threads == 0) {
    threads = std::max(1U, std::thread::hardware_concurrency());
  }
  const std::uint64_t workers = std::min<std::uint64_t>(threads, std::max<std::uint64_t>(1, total / 4096));

  auto work = [&](std::uint64_t begin, std::uint64_t end) {
    std::vector<std::uint8_t> bits(n, 0);
    unrank_pattern_into(k, begin, bits);
    std::vector<std::size_t> idx(k);
    for (std::uint64_t rank = begin; rank < end; ++rank) {
      std::size_t w = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (bits[i]) {
          idx[w++] = i;
        }
      }
      weights[rank] = std::norm(hafnian_of_indices(b, idx));
      if (rank + 1 < end) {
        next_pattern(bits);
      }
    }
  };

  if (workers <= 1) {
    work(0, total);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (total + workers - 1) / workers;
    for (std::uint64_t w = 0; w < workers; ++w) {
      const std::uint64_t begin = w * chunk;
      const std::uint64_t end = std::min(total, begin + chunk);
      if (begin < end) {
        pool.emplace_back(work, begin, end);
      }
    }
    for (auto& t : pool) {
      t.join();
    }
  }
  return ConditionalGBSDistribution::from_weights(n, k, r, std::move(weights));
}

PhotonPattern gbs_explore(const ConditionalGBSDistribution& dist, RandomStream& rng) {
  return dist.pattern(dist.sample_index(rng));
}

PhotonPattern uniform_explore(std::size_t n, std::size_t k, RandomStream& rng) {
  if (k > n) {
    throw InvalidArgument("uniform_explore: k exceeds n");
  }
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) {
    idx[i] = i;
  }
  partial_shuffle(idx, k, rng);
  return PhotonPattern::from_indices(n, std::span<const std::size_t>(idx.data(), k));
}

void TweakParams::validate() const {
  if (k < 2 || k % 2 != 0) {
    throw InvalidArgument("TweakParams: k must be even and at least 2");
  }
  if (ell % 2 != 0 || ell + 2 > k) {
    throw InvalidArgument("TweakParams: ell must be even and at most k - 2");
  }
  if (ell < k - ell) {
    throw InvalidArgument("TweakParams: ell must be at least k - ell (ell = " + std::to_string(ell) +
                          ", k = " + std::to_string(k) + ")");
  }
}

PhotonPattern gbs_tweak(const PhotonPattern& s, const TweakParams& params,
                        const ConditionalGBSDistribution& dist_ell, RandomStream& rng,
                        std::size_t max_retries) {
  if (dist_ell.k() != params.ell || dist_ell.n() != s.size()) {
    throw InvalidArgument("gbs_tweak: dist_ell must be the ell-photon law on the same matrix");
  }
  KeptOnes kept = keep_subset(s, params, rng);
  for (std::size_t attempt = 0; attempt < max_retries; ++attempt) {
    auto t_ones = gbs_explore(dist_ell, rng).ones();
    partial_shuffle(t_ones, kept.need, rng);
    const bool collides = std::any_of(t_ones.begin(), t_ones.begin() + static_cast<std::ptrdiff_t>(kept.need),
                                      [&](std::size_t i) { return kept.bits[i] != 0; });
    if (collides) {
      continue;
    }
    std::vector<std::uint8_t> bits = kept.bits;
    for (std::size_t i = 0; i < kept.need; ++i) {
      bits[t_ones[i]] = 1;
    }
    return PhotonPattern(std::move(bits));
  }
  throw TweakFailure("gbs_tweak: no collision-free draw within " + std::to_string(max_retries) + " attempts");
}

PhotonPattern uniform_tweak(const PhotonPattern& s, const TweakParams& params, RandomStream& rng) {
  if (params.k >= s.size()) {
    throw InvalidArgument("uniform_tweak: requires k < n");
  }
  KeptOnes kept = keep_subset(s, params, rng);
  std::vector<std::size_t> zeros;
  zeros.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!kept.bits[i]) {
      zeros.push_back(i);
    }
  }
  partial_shuffle(zeros, kept.need, rng);
  for (std::size_t i = 0; i < kept.need; ++i) {
    kept.bits[zeros[i]] = 1;
  }
  return PhotonPattern(std::move(kept.bits));
}

AdvantageDiagnostics advantage_diagnostics(std::span<const double> weights) {
  if (weights.empty()) {
    throw InvalidArgument("advantage_diagnostics: no weights");
  }
  double sum = 0.0;
  double sq = 0.0;
  for (double w : weights) {
    sum += w;
    sq += w * w;
  }
  if (sum <= 0.0) {
    throw DegenerateDistribution("advantage_diagnostics: every weight is zero");
  }
  AdvantageDiagnostics d;
  d.mu_u = sum / static_cast<double>(weights.size());
  d.mu_gbs = sq / sum;
  d.ratio = d.mu_gbs / d.mu_u;
  return d;
}

AdvantageDiagnostics gbs_advantage_diagnostics(const ConditionalGBSDistribution& dist) {
  return advantage_diagnostics(dist.weights());
}

void write_distribution_csv(const ConditionalGBSDistribution& dist, std::ostream& out) {
  out << "pattern,weight,probability\n";
  const auto w = dist.weights();
  for_each_pattern(dist.n(), dist.k(), [&](std::span<const std::uint8_t> bits, std::uint64_t rank) {
    std::string s(bits.size(), '0');
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i]) {
        s[i] = '1';
      }
    }
    out << s << ',' << format_double(w[rank]) << ',' << format_double(dist.probability(rank)) << '\n';
  });
}

ConditionalGBSDistribution read_distribution_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "pattern,weight,probability") {
    throw InvalidArgument("distribution CSV: missing header 'pattern,weight,probability'");
  }
  std::vector<double> weights;
  std::size_t n = 0;
  std::size_t k = 0;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw InvalidArgument("distribution CSV: malformed row '" + line + "'");
    }
    const PhotonPattern p = PhotonPattern::from_bitstring(std::string_view(line).substr(0, c1));
    if (weights.empty()) {
      n = p.size();
      k = p.count();
    }
    if (p.size() != n || p.count() != k || rank_pattern(p) != weights.size()) {
      throw InvalidArgument("distribution CSV: row " + std::to_string(weights.size() + 1) +
                            " is not the next pattern in lexicographic order");
    }
    weights.push_back(parse_double(std::string_view(line).substr(c1 + 1, c2 - c1 - 1)));
  }
  if (weights.empty()) {
    throw InvalidArgument("distribution CSV: no rows");
  }
  return ConditionalGBSDistribution::from_weights(n, k, kNaN, std::move(weights));
}

}  // namespace gbsopt
