//
// Copyright 2026 The egamma Authors
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
//

// Hockey-stick (E_gamma) divergences and the Gaussian tail special functions
// everything else in the library is built on.
//
// E_gamma(mu || nu) = sup_A [mu(A) - gamma nu(A)] for gamma >= 1. Between two
// Gaussians with common covariance sigma^2 I whose means are a distance
// `mean_distance` apart it equals theta_gamma(mean_distance / sigma), where
//
//   theta_gamma(r) = Q(log(gamma) / r - r / 2) - gamma Q(log(gamma) / r + r / 2)
//
// and Q is the standard Gaussian upper tail. All functions are pure.

#ifndef EGAMMA_DIVERGENCES_H_
#define EGAMMA_DIVERGENCES_H_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace egamma {

// A divergence order gamma >= 1. Stored together with log(gamma) so that
// levels built from a privacy parameter epsilon keep epsilon exactly.
class GammaLevel {
 public:
  // Throws DomainError unless gamma is finite and >= 1.
  explicit GammaLevel(double gamma);

  // gamma = e^epsilon. Throws DomainError unless epsilon is finite and >= 0.
  static GammaLevel FromEpsilon(double epsilon);

  double gamma() const { return gamma_; }
  double log_gamma() const { return log_gamma_; }
  double epsilon() const { return log_gamma_; }

 private:
  GammaLevel(double gamma, double log_gamma)
      : gamma_(gamma), log_gamma_(log_gamma) {}

  double gamma_;
  double log_gamma_;
};

// Two Gaussians N(m1, sigma^2 I) and N(m2, sigma^2 I), described by
// ||m2 - m1|| and sigma.
class GaussianPair {
 public:
  GaussianPair(double mean_distance, double sigma);

  double mean_distance() const { return mean_distance_; }
  double sigma() const { return sigma_; }
  // ||m2 - m1|| / sigma.
  double ratio() const { return mean_distance_ / sigma_; }

 private:
  double mean_distance_;
  double sigma_;
};

// Probability vector over a finite alphabet. Entries are nonnegative and sum
// to one within kProbabilitySumTolerance.
class DiscreteDistribution {
 public:
  static constexpr double kProbabilitySumTolerance = 1e-12;

  explicit DiscreteDistribution(std::vector<double> probs);

  // [1 - p, p].
  static DiscreteDistribution Bernoulli(double p);
  static DiscreteDistribution PointMass(std::size_t size, std::size_t index);

  std::span<const double> probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }

 private:
  std::vector<double> probs_;
};

// Standard Gaussian upper tail Q(a) = P(Z > a).
double QFunction(double a);

// log Q(a), accurate far into the upper tail where Q(a) underflows.
double LogQFunction(double a);

// theta_gamma(r); 0 at r = 0 and 1 at r = +inf. Throws DomainError for r < 0
// or NaN.
double ThetaGamma(const GammaLevel& level, double r);

// log theta_gamma(r); -inf at r = 0.
double LogThetaGamma(const GammaLevel& level, double r);

// 1 - theta_gamma(r) without cancellation: Q(-a) + gamma Q(b).
double ThetaGammaComplement(const GammaLevel& level, double r);
double LogThetaGammaComplement(const GammaLevel& level, double r);

// E_gamma between two Gaussians with equal isotropic covariance.
double EGammaGaussian(const GaussianPair& pair, const GammaLevel& level);

// sum_i (mu_i - gamma nu_i)^+. Throws ShapeError on size mismatch.
double EGammaDiscrete(const DiscreteDistribution& mu,
                      const DiscreteDistribution& nu, const GammaLevel& level);

// Unchecked inner loops shared with the kernel code. `p` and `q` must have
// equal length.
double EGammaSpan(std::span<const double> p, std::span<const double> q,
                  double gamma);
double TotalVariationSpan(std::span<const double> p, std::span<const double> q);

// A real function of gamma on [1, inf): an E_gamma curve gamma -> E_gamma(.||.),
// a second derivative f'', or a contraction curve gamma -> eta_gamma(K).
using GammaCurve = std::function<double(double)>;

struct EGammaIntegralOptions {
  // Upper integration limit. When unset it is chosen as the first e^k,
  // k = 1, 2, ..., at which every integrand term is below tol / gamma.
  double gamma_max = 0.0;
  // Truncation tolerance; also the relative quadrature tolerance.
  double tol = 1e-6;
  // Known kinks of the integrand inside (1, gamma_max).
  std::vector<double> breakpoints;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  // Size of the integrand (in log-gamma coordinates) at gamma_max, an
  // estimate of the neglected tail.
  double truncation_bound = 0.0;
  double gamma_max = 0.0;
};

// Integral over [1, gamma_max] of
//   weight(gamma) [f''(gamma) E_gamma(mu||nu)
//                  + gamma^-3 f''(1/gamma) E_gamma(nu||mu)].
// With weight = 1 this is D_f(mu || nu); with weight = eta_gamma(K) it is the
// output f-divergence bound through K. Throws NumericalError when the
// quadrature does not converge or the tail at gamma_max exceeds `tol`.
QuadratureResult WeightedEGammaIntegral(const GammaCurve& weight,
                                        const GammaCurve& second_derivative,
                                        const GammaCurve& curve_mu_nu,
                                        const GammaCurve& curve_nu_mu,
                                        const EGammaIntegralOptions& options);

// D_f(mu || nu) recovered from the two E_gamma curves of the pair.
QuadratureResult FDivergenceFromEGammaCurves(
    const GammaCurve& second_derivative, const GammaCurve& curve_mu_nu,
    const GammaCurve& curve_nu_mu, const EGammaIntegralOptions& options);

}  // namespace egamma

#endif  // EGAMMA_DIVERGENCES_H_
