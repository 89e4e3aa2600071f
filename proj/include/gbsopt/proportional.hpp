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

#ifndef GBSOPT_PROPORTIONAL_HPP
#define GBSOPT_PROPORTIONAL_HPP

#include <cstddef>
#include <vector>

#include "gbsopt/random.hpp"

/// Closed-form theory of proportional versus uniform sampling for random
/// search: single-draw expectations, the best-of-kappa order statistic under
/// the exponential family p(y) = lambda e^{lambda(y-1)} / (1 - e^{-lambda}),
/// and the GBS advantage ratio R(n, k).
namespace gbsopt::prop {

/// Non-negative objective values y_1..y_N with at least one positive entry.
class ObjectiveVector {
 public:
  explicit ObjectiveVector(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double norm1() const;
  double norm2_squared() const;

 private:
  std::vector<double> values_;
};

struct ExpFamilyParams {
  double lambda = 1.0;
  std::size_t kappa = 1;

  void validate() const;
};

/// ||y||_1 / N.
double expectation_uniform(const ObjectiveVector& y);
/// ||y||_2^2 / ||y||_1.
double expectation_proportional(const ObjectiveVector& y);
/// (sqrt(N) ||y||_2 / ||y||_1)^2, never below 1.
double advantage_ratio(const ObjectiveVector& y);

/// kappa / (kappa + 1).
double expected_max_uniform(std::size_t kappa);

double exp_density(double lambda, double y);
/// CDF of exp_density on (0, 1].
double exp_cdf(double lambda, double y);
/// y = 1 + ln(u (1 - e^{-lambda}) + e^{-lambda}) / lambda for u in (0, 1].
double exp_inverse_cdf(double lambda, double u);

double harmonic_number(std::size_t kappa);

/// 3F2(1, 1, 1 - kappa; 2, 2; z) as its kappa-term terminating series, in
/// double precision.
double hyp3f2_terminating(std::size_t kappa, double z);

/// E[max of kappa draws] under the exponential family:
///   (1/lambda)(1 - e^lambda)^{-kappa} [ ((1 - e^lambda)^kappa - 1) lambda
///       - H_kappa + kappa e^lambda 3F2(1, 1, 1 - kappa; 2, 2; e^lambda) ].
/// The alternating series cancels badly, so the whole expression is
/// evaluated in MPFR at a precision sized to the predicted loss of digits.
/// Throws ResourceLimit when that precision would exceed 20000 digits.
double expected_max_proportional(const ExpFamilyParams& params);

/// -log10(1 - e_max) for e_max in [0, 1).
double alpha_coefficient(double e_max);

/// C(n,k) k!! / (C((n+k)/2 - 1, k/2) n^{k/2}), evaluated in log space.
double analytic_ratio_R(std::size_t n, std::size_t k);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Monte-Carlo E[max of kappa draws], uniform on (0, 1] or from the
/// exponential family by inverse CDF.
McEstimate mc_expected_max(const ExpFamilyParams& params, bool proportional, std::size_t trials,
                           RandomStream& rng);

}  // namespace gbsopt::prop

#endif  // GBSOPT_PROPORTIONAL_HPP
