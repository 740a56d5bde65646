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

#include "egamma/divergences.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "egamma/errors.h"

namespace egamma {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Above this argument log Q is taken from the Mills-ratio continued fraction
// rather than from erfc, which loses relative accuracy and then underflows.
constexpr double kMillsThreshold = 20.0;

// log(1 - e^x) for x <= 0.
double Log1mExp(double x) {
  if (x >= 0.0) return -kInf;
  return x > -std::numbers::ln2 ? std::log(-std::expm1(x))
                                : std::log1p(-std::exp(x));
}

double LogAddExp(double x, double y) {
  if (x == -kInf) return y;
  if (y == -kInf) return x;
  const double m = std::max(x, y);
  return m + std::log1p(std::exp(-std::abs(x - y)));
}

// Q(x) / phi(x) for x >= kMillsThreshold, by backward evaluation of
// 1 / (x + 1 / (x + 2 / (x + 3 / (x + ...)))).
double MillsRatio(double x) {
  double t = x;
  for (int k = 60; k >= 1; --k) t = x + k / t;
  return 1.0 / t;
}

void CheckRadius(double r) {
  if (std::isnan(r) || r < 0.0) {
    throw DomainError("theta_gamma: radius must be >= 0, got " +
                      std::to_string(r));
  }
}

}  // namespace

GammaLevel::GammaLevel(double gamma) {
  if (!std::isfinite(gamma) || gamma < 1.0) {
    throw DomainError("GammaLevel: gamma must be finite and >= 1, got " +
                      std::to_string(gamma));
  }
  gamma_ = gamma;
  log_gamma_ = std::log(gamma);
}

GammaLevel GammaLevel::FromEpsilon(double epsilon) {
  if (!std::isfinite(epsilon) || epsilon < 0.0) {
    throw DomainError("GammaLevel: epsilon must be finite and >= 0, got " +
                      std::to_string(epsilon));
  }
  const double gamma = std::exp(epsilon);
  if (!std::isfinite(gamma)) {
    throw DomainError("GammaLevel: e^epsilon overflows for epsilon = " +
                      std::to_string(epsilon));
  }
  return GammaLevel(gamma, epsilon);
}

GaussianPair::GaussianPair(double mean_distance, double sigma)
    : mean_distance_(mean_distance), sigma_(sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("GaussianPair: sigma must be positive and finite");
  }
  if (!(mean_distance >= 0.0) || !std::isfinite(mean_distance)) {
    throw DomainError("GaussianPair: mean distance must be >= 0 and finite");
  }
  if (!std::isfinite(ratio())) {
    throw DomainError("GaussianPair: mean_distance / sigma is not finite");
  }
}

DiscreteDistribution::DiscreteDistribution(std::vector<double> probs)
    : probs_(std::move(probs)) {
  if (probs_.empty()) {
    throw DomainError("DiscreteDistribution: empty probability vector");
  }
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw DomainError("DiscreteDistribution: entries must be finite and >= 0");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbabilitySumTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "DiscreteDistribution: entries sum to " << sum << ", not 1";
    throw DomainError(msg.str());
  }
}

DiscreteDistribution DiscreteDistribution::Bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("Bernoulli: p must lie in [0, 1]");
  }
  return DiscreteDistribution({1.0 - p, p});
}

DiscreteDistribution DiscreteDistribution::PointMass(std::size_t size,
                                                     std::size_t index) {
  if (index >= size) throw ShapeError("PointMass: index out of range");
  std::vector<double> probs(size, 0.0);
  probs[index] = 1.0;
  return DiscreteDistribution(std::move(probs));
}

double QFunction(double a) {
  if (!std::isfinite(a)) {
    throw DomainError("QFunction: argument must be finite");
  }
  return 0.5 * std::erfc(a / std::numbers::sqrt2);
}

double LogQFunction(double a) {
  if (std::isnan(a)) throw DomainError("LogQFunction: NaN argument");
  if (a == kInf) return -kInf;
  if (a == -kInf) return 0.0;
  if (a < -5.0) return std::log1p(-QFunction(-a));
  if (a < kMillsThreshold) return std::log(QFunction(a));
  // log phi(a) + log(Q(a) / phi(a)).
  return -0.5 * a * a - 0.5 * std::log(2.0 * std::numbers::pi) +
         std::log(MillsRatio(a));
}

double ThetaGamma(const GammaLevel& level, double r) {
  CheckRadius(r);
  if (r == 0.0) return 0.0;
  if (r == kInf) return 1.0;
  if (level.log_gamma() == 0.0) {
    // Total variation between N(0, 1) and N(r, 1).
    return std::erf(r / (2.0 * std::numbers::sqrt2));
  }
  const double shift = level.log_gamma() / r;
  const double a = shift - 0.5 * r;
  const double b = shift + 0.5 * r;
  const double qa = QFunction(a);
  const double direct = qa - level.gamma() * QFunction(b);
  if (qa > 1e-290 && direct > 1e-3 * qa) return std::clamp(direct, 0.0, 1.0);
  return std::exp(LogThetaGamma(level, r));
}

double LogThetaGamma(const GammaLevel& level, double r) {
  CheckRadius(r);
  if (r == 0.0) return -kInf;
  if (r == kInf) return 0.0;
  if (level.log_gamma() == 0.0) {
    const double x = r / (2.0 * std::numbers::sqrt2);
    return x < 1.0 ? std::log(std::erf(x)) : std::log1p(-std::erfc(x));
  }
  const double shift = level.log_gamma() / r;
  const double la = LogQFunction(shift - 0.5 * r);
  const double lb = LogQFunction(shift + 0.5 * r);
  return std::min(0.0, la + Log1mExp(level.log_gamma() + lb - la));
}

double ThetaGammaComplement(const GammaLevel& level, double r) {
  CheckRadius(r);
  if (r == 0.0) return 1.0;
  if (r == kInf) return 0.0;
  return std::min(1.0, std::exp(LogThetaGammaComplement(level, r)));
}

double LogThetaGammaComplement(const GammaLevel& level, double r) {
  CheckRadius(r);
  if (r == 0.0) return 0.0;
  if (r == kInf) return -kInf;
  if (level.log_gamma() == 0.0) {
    const double x = r / (2.0 * std::numbers::sqrt2);
    return x < kMillsThreshold ? std::log(std::erfc(x))
                               : LogQFunction(std::numbers::sqrt2 * x) +
                                     std::numbers::ln2;
  }
  const double shift = level.log_gamma() / r;
  const double a = shift - 0.5 * r;
  const double b = shift + 0.5 * r;
  return std::min(
      0.0, LogAddExp(LogQFunction(-a), level.log_gamma() + LogQFunction(b)));
}

double EGammaGaussian(const GaussianPair& pair, const GammaLevel& level) {
  return ThetaGamma(level, pair.ratio());
}

double EGammaSpan(std::span<const double> p, std::span<const double> q,
                  double gamma) {
  double sum = 0.0;
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    sum += std::max(p[i] - gamma * q[i], 0.0);
  }
  return std::min(sum, 1.0);
}

double TotalVariationSpan(std::span<const double> p,
                          std::span<const double> q) {
  return EGammaSpan(p, q, 1.0);
}

double EGammaDiscrete(const DiscreteDistribution& mu,
                      const DiscreteDistribution& nu, const GammaLevel& level) {
  if (mu.size() != nu.size()) {
    throw ShapeError("EGammaDiscrete: alphabet sizes differ (" +
                     std::to_string(mu.size()) + " vs " +
                     std::to_string(nu.size()) + ")");
  }
  return EGammaSpan(mu.probs(), nu.probs(), level.gamma());
}

QuadratureResult WeightedEGammaIntegral(const GammaCurve& weight,
                                        const GammaCurve& second_derivative,
                                        const GammaCurve& curve_mu_nu,
                                        const GammaCurve& curve_nu_mu,
                                        const EGammaIntegralOptions& options) {
  if (!(options.tol > 0.0)) {
    throw DomainError("WeightedEGammaIntegral: tol must be positive");
  }
  // The two integrand terms, each already multiplied by gamma (the Jacobian
  // of gamma = e^s).
  auto terms = [&](double gamma) {
    const double w = weight(gamma);
    if (w == 0.0) return std::pair{0.0, 0.0};
    const double forward = second_derivative(gamma) * curve_mu_nu(gamma);
    const double backward = second_derivative(1.0 / gamma) *
                            curve_nu_mu(gamma) / (gamma * gamma * gamma);
    return std::pair{w * forward * gamma, w * backward * gamma};
  };
  auto below_tol = [&](double gamma) {
    const auto [f, b] = terms(gamma);
    return std::abs(f) < options.tol && std::abs(b) < options.tol;
  };

  QuadratureResult result;
  double gamma_max = options.gamma_max;
  if (gamma_max == 0.0) {
    int k = 1;
    for (; k < 700 && !below_tol(std::exp(k)); ++k) {
    }
    if (k == 700) {
      throw NumericalError(
          "WeightedEGammaIntegral: integrand does not decay below tol before "
          "gamma = e^700");
    }
    gamma_max = std::exp(k);
  }
  if (!(gamma_max >= 1.0) || !std::isfinite(gamma_max)) {
    throw DomainError("WeightedEGammaIntegral: gamma_max must be >= 1");
  }
  {
    const auto [f, b] = terms(gamma_max);
    result.truncation_bound = std::max(std::abs(f), std::abs(b));
  }
  if (result.truncation_bound >= options.tol) {
    std::ostringstream msg;
    msg << "WeightedEGammaIntegral: integrand at gamma_max = " << gamma_max
        << " is " << result.truncation_bound << ", not below tol "
        << options.tol;
    throw NumericalError(msg.str());
  }
  result.gamma_max = gamma_max;

  std::vector<double> cuts{0.0};
  const double s_max = std::log(gamma_max);
  for (double g : options.breakpoints) {
    if (g > 1.0 && g < gamma_max) cuts.push_back(std::log(g));
  }
  cuts.push_back(s_max);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto integrand = [&](double s) {
    const auto [f, b] = terms(std::exp(s));
    return f + b;
  };
  const double quad_tol = std::min(options.tol, 1e-9);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    double error = 0.0;
    double l1 = 0.0;
    const double piece =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            integrand, cuts[k], cuts[k + 1], 25, quad_tol, &error, &l1);
    if (!std::isfinite(piece) || error > options.tol * std::max(1.0, l1)) {
      std::ostringstream msg;
      msg << "WeightedEGammaIntegral: quadrature did not converge on [e^"
          << cuts[k] << ", e^" << cuts[k + 1] << "]: value " << piece
          << ", error estimate " << error << ", L1 " << l1;
      throw NumericalError(msg.str());
    }
    result.value += piece;
    result.error_estimate += error;
  }
  return result;
}

QuadratureResult FDivergenceFromEGammaCurves(
    const GammaCurve& second_derivative, const GammaCurve& curve_mu_nu,
    const GammaCurve& curve_nu_mu, const EGammaIntegralOptions& options) {
  return WeightedEGammaIntegral([](double) { return 1.0; }, second_derivative,
                                curve_mu_nu, curve_nu_mu, options);
}

}  // namespace egamma
