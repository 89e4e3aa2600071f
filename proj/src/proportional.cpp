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

#include "gbsopt/proportional.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gbsopt/errors.hpp"
#include "gbsopt/pattern.hpp"

namespace gbsopt::prop {

namespace {

// Owning mpfr_t with a fixed precision.
class MpReal {
 public:
  explicit MpReal(mpfr_prec_t bits) { mpfr_init2(value_, bits); }
  ~MpReal() { mpfr_clear(value_); }
  MpReal(const MpReal&) = delete;
  MpReal& operator=(const MpReal&) = delete;

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }

 private:
  mpfr_t value_;
};

constexpr double kMaxWorkingDigits = 20000.0;

// Decimal digits the closed form loses to cancellation: size of its
// largest summand relative to the result.
double predicted_digit_loss(double lambda, std::size_t kappa) {
  const double log10e = std::numbers::log10e;
  const double k = static_cast<double>(kappa);
  // The result is E * lambda * (1 - e^lambda)^kappa with E in [1/2, 1].
  const double log10_result = k * std::log10(std::expm1(lambda)) + std::log10(lambda) - std::log10(2.0);
  double log10_max = std::max(std::log10(std::log(k) + 1.0),
                              k * std::log10(std::expm1(lambda)) + std::log10(lambda));
  double log_binom = 0.0;  // ln C(kappa - 1, j)
  for (std::size_t j = 0; j < kappa; ++j) {
    const double jd = static_cast<double>(j);
    const double term = std::log10(k) + lambda * log10e * (jd + 1.0) + log_binom * log10e -
                        2.0 * std::log10(jd + 1.0);
    log10_max = std::max(log10_max, term);
    log_binom += std::log((k - 1.0 - jd) / (jd + 1.0));
  }
  return std::max(0.0, log10_max - log10_result);
}

}  // namespace

ObjectiveVector::ObjectiveVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw InvalidArgument("ObjectiveVector: need at least one value");
  }
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidArgument("ObjectiveVector: values must be finite and non-negative");
    }
  }
}

double ObjectiveVector::norm1() const {
  double s = 0.0;
  for (double v : values_) {
    s += v;
  }
  return s;
}

double ObjectiveVector::norm2_squared() const {
  double s = 0.0;
  for (double v : values_) {
    s += v * v;
  }
  return s;
}

void ExpFamilyParams::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument("lambda must be positive and finite");
  }
  if (kappa < 1) {
    throw InvalidArgument("kappa must be at least 1");
  }
}

double expectation_uniform(const ObjectiveVector& y) {
  return y.norm1() / static_cast<double>(y.size());
}

double expectation_proportional(const ObjectiveVector& y) {
  const double l1 = y.norm1();
  if (l1 == 0.0) {
    throw InvalidArgument("expectation_proportional: all-zero vector has no proportional law");
  }
  return y.norm2_squared() / l1;
}

double advantage_ratio(const ObjectiveVector& y) {
  const double l1 = y.norm1();
  if (l1 == 0.0) {
    throw InvalidArgument("advantage_ratio: all-zero vector has no proportional law");
  }
  return static_cast<double>(y.size()) * y.norm2_squared() / (l1 * l1);
}

double expected_max_uniform(std::size_t kappa) {
  if (kappa < 1) {
    throw InvalidArgument("expected_max_uniform: kappa must be at least 1");
  }
  const double k = static_cast<double>(kappa);
  return k / (k + 1.0);
}

double exp_density(double lambda, double y) {
  if (!(lambda > 0.0)) {
    throw InvalidArgument("exp_density: lambda must be positive");
  }
  // lambda e^{lambda(y-1)} / (1 - e^{-lambda})
  return lambda * std::exp(lambda * (y - 1.0)) / -std::expm1(-lambda);
}

double exp_cdf(double lambda, double y) {
  if (!(lambda > 0.0)) {
    throw InvalidArgument("exp_cdf: lambda must be positive");
  }
  if (y <= 0.0) {
    return 0.0;
  }
  if (y >= 1.0) {
    return 1.0;
  }
  return std::expm1(lambda * y) / std::expm1(lambda);
}

double exp_inverse_cdf(double lambda, double u) {
  if (!(lambda > 0.0)) {
    throw InvalidArgument("exp_inverse_cdf: lambda must be positive");
  }
  // Solves e^{lambda y} - 1 = u (e^lambda - 1). Past the overflow point the
  // same equation is taken in the form y = 1 + ln(u (1 - e^{-lambda}) + e^{-lambda}) / lambda.
  if (lambda < 700.0) {
    return std::log1p(u * std::expm1(lambda)) / lambda;
  }
  return 1.0 + std::log(u * -std::expm1(-lambda) + std::exp(-lambda)) / lambda;
}

double harmonic_number(std::size_t kappa) {
  if (kappa < 1) {
    throw InvalidArgument("harmonic_number: kappa must be at least 1");
  }
  double h = 0.0;
  for (std::size_t i = kappa; i >= 1; --i) {
    h += 1.0 / static_cast<double>(i);
  }
  return h;
}

double hyp3f2_terminating(std::size_t kappa, double z) {
  if (kappa < 1) {
    throw InvalidArgument("hyp3f2_terminating: kappa must be at least 1");
  }
  const double k = static_cast<double>(kappa);
  double term = 1.0;
  double sum = 1.0;
  for (std::size_t j = 0; j + 1 < kappa; ++j) {
    const double jd = static_cast<double>(j);
    // (1)_j (1)_j (1-kappa)_j / ((2)_j (2)_j j!) ratio of consecutive terms
    term *= (jd + 1.0) * (jd + 1.0 - k) * z / ((jd + 2.0) * (jd + 2.0));
    sum += term;
  }
  return sum;
}

double expected_max_proportional(const ExpFamilyParams& params) {
  params.validate();
  const double lambda = params.lambda;
  const std::size_t kappa = params.kappa;
  const double lost = predicted_digit_loss(lambda, kappa);
  const double digits = lost + 40.0;
  if (!std::isfinite(digits) || digits > kMaxWorkingDigits) {
    throw ResourceLimit("expected_max_proportional: lambda = " + std::to_string(lambda) +
                        ", kappa = " + std::to_string(kappa) + " needs about " +
                        std::to_string(static_cast<long long>(digits)) +
                        " working digits; reduce lambda or kappa");
  }
  const auto bits = static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623) + 16);

  MpReal lam(bits), z(bits), one_minus_z(bits), a(bits), h(bits), f(bits), coeff(bits), term(bits),
      tmp(bits), bracket(bits);
  mpfr_set_d(lam.get(), lambda, MPFR_RNDN);
  mpfr_exp(z.get(), lam.get(), MPFR_RNDN);
  mpfr_ui_sub(one_minus_z.get(), 1, z.get(), MPFR_RNDN);
  mpfr_pow_ui(a.get(), one_minus_z.get(), kappa, MPFR_RNDN);

  mpfr_set_zero(h.get(), 1);
  for (std::size_t i = 1; i <= kappa; ++i) {
    mpfr_set_ui(tmp.get(), 1, MPFR_RNDN);
    mpfr_div_ui(tmp.get(), tmp.get(), i, MPFR_RNDN);
    mpfr_add(h.get(), h.get(), tmp.get(), MPFR_RNDN);
  }

  // f = sum_j (-1)^j C(kappa-1, j) z^j / (j+1)^2
  mpfr_set_zero(f.get(), 1);
  mpfr_set_ui(coeff.get(), 1, MPFR_RNDN);
  for (std::size_t j = 0; j < kappa; ++j) {
    mpfr_div_ui(term.get(), coeff.get(), (j + 1) * (j + 1), MPFR_RNDN);
    mpfr_add(f.get(), f.get(), term.get(), MPFR_RNDN);
    mpfr_mul(coeff.get(), coeff.get(), z.get(), MPFR_RNDN);
    mpfr_mul_ui(coeff.get(), coeff.get(), kappa - 1 - j, MPFR_RNDN);
    mpfr_div_ui(coeff.get(), coeff.get(), j + 1, MPFR_RNDN);
    mpfr_neg(coeff.get(), coeff.get(), MPFR_RNDN);
  }

  // bracket = (a - 1) lambda - H + kappa z f
  mpfr_sub_ui(bracket.get(), a.get(), 1, MPFR_RNDN);
  mpfr_mul(bracket.get(), bracket.get(), lam.get(), MPFR_RNDN);
  mpfr_sub(bracket.get(), bracket.get(), h.get(), MPFR_RNDN);
  mpfr_mul(tmp.get(), z.get(), f.get(), MPFR_RNDN);
  mpfr_mul_ui(tmp.get(), tmp.get(), kappa, MPFR_RNDN);
  mpfr_add(bracket.get(), bracket.get(), tmp.get(), MPFR_RNDN);

  // result = bracket / (lambda a)
  mpfr_mul(tmp.get(), lam.get(), a.get(), MPFR_RNDN);
  mpfr_div(bracket.get(), bracket.get(), tmp.get(), MPFR_RNDN);
  return mpfr_get_d(bracket.get(), MPFR_RNDN);
}

double alpha_coefficient(double e_max) {
  if (!(e_max >= 0.0) || e_max >= 1.0) {
    throw InvalidArgument("alpha_coefficient: e_max must lie in [0, 1)");
  }
  return -std::log10(1.0 - e_max);
}

double analytic_ratio_R(std::size_t n, std::size_t k) {
  if (k < 2 || k % 2 != 0 || k > n) {
    throw InvalidArgument("analytic_ratio_R: need even k with 2 <= k <= n");
  }
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  double log_kdf = 0.0;
  for (std::size_t i = k; i > 1; i -= 2) {
    log_kdf += std::log(static_cast<double>(i));
  }
  const double log_r = log_binomial(nd, k) + log_kdf - log_binomial((nd + kd) / 2.0 - 1.0, k / 2) -
                       (kd / 2.0) * std::log(nd);
  return std::exp(log_r);
}

McEstimate mc_expected_max(const ExpFamilyParams& params, bool proportional, std::size_t trials,
                           RandomStream& rng) {
  params.validate();
  if (trials < 1000) {
    throw InvalidArgument("mc_expected_max: need at least 1000 trials");
  }
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t t = 1; t <= trials; ++t) {
    double best = 0.0;
    for (std::size_t i = 0; i < params.kappa; ++i) {
      const double u = rng.uniform_open_closed();
      const double y = proportional ? exp_inverse_cdf(params.lambda, u) : u;
      best = std::max(best, y);
    }
    const double d = best - mean;
    mean += d / static_cast<double>(t);
    m2 += d * (best - mean);
  }
  const double n = static_cast<double>(trials);
  return {mean, std::sqrt(m2 / (n - 1.0) / n)};
}

}  // namespace gbsopt::prop
