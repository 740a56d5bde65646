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

#include "egamma/ogd.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "egamma/divergences.h"
#include "egamma/errors.h"

namespace egamma {
namespace {

void CheckPositive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string("OgdConfig: ") + what +
                      " must be positive and finite");
  }
}

Tradeoff GeometricTradeoff(std::int64_t n, const GammaLevel& level,
                           double psi_ratio, double diameter_ratio,
                           double utility) {
  const double log_tail = LogThetaGammaComplement(level, diameter_ratio);
  if (log_tail == -std::numeric_limits<double>::infinity()) {
    throw NumericalError(
        "OGD privacy bound diverges: theta(D / sigma) == 1; use the per-index "
        "randomly-stopped modes");
  }
  double log_delta = -std::log(static_cast<double>(n)) +
                     LogThetaGamma(level, psi_ratio) - log_tail;
  log_delta = std::min(log_delta, 0.0);
  return {std::exp(log_delta), log_delta / std::numbers::ln10, utility};
}

struct ShardSums {
  double sum = 0.0;
  double sum_sq = 0.0;
};

ShardSums RunShard(const QuadraticFamily& family, const OgdConfig& config,
                   std::int64_t trials, std::uint64_t seed, int shard) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(shard)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> center(family.center_lo,
                                                family.center_hi);
  std::normal_distribution<double> noise(0.0, 1.0);
  const double hi = config.domain_diameter;
  const double optimum = 0.5 * (family.center_lo + family.center_hi);
  const double inv_n = 1.0 / static_cast<double>(config.n);

  ShardSums sums;
  for (std::int64_t k = 0; k < trials; ++k) {
    double w = 0.0;
    double excess = 0.0;
    for (std::int64_t t = 1; t <= config.n; ++t) {
      excess += 0.5 * (w - optimum) * (w - optimum);
      const double step = OgdStepSize(config, t);
      const double c = center(rng);
      const double z = noise(rng);
      w = std::clamp(w - step * (w - c) + step * config.sigmas[t - 1] * z, 0.0,
                     hi);
    }
    // Averaging over every t of the trajectory evaluates the expectation over
    // the uniform stopping time T exactly.
    const double value = excess * inv_n;
    sums.sum += value;
    sums.sum_sq += value * value;
  }
  return sums;
}

}  // namespace

OgdConfig OgdConfig::ConstantSigma(std::int64_t n, double grad_bound,
                                   double domain_diameter,
                                   std::int64_t dimension, double sigma,
                                   double psi, double b) {
  if (n < 1) throw DomainError("OgdConfig: n must be >= 1");
  OgdConfig c;
  c.n = n;
  c.grad_bound = grad_bound;
  c.domain_diameter = domain_diameter;
  c.dimension = dimension;
  c.sigmas.assign(n, sigma);
  c.psi = psi;
  c.b = b;
  c.Validate();
  return c;
}

OgdConfig OgdConfig::ConstantLambda(std::int64_t n, double grad_bound,
                                    double domain_diameter,
                                    std::int64_t dimension, double lambda,
                                    double psi, double b) {
  if (n < 1) throw DomainError("OgdConfig: n must be >= 1");
  if (!(lambda > 0.0)) throw DomainError("OgdConfig: lambda must be positive");
  OgdConfig c;
  c.n = n;
  c.grad_bound = grad_bound;
  c.domain_diameter = domain_diameter;
  c.dimension = dimension;
  c.psi = psi;
  c.b = b;
  c.sigmas.resize(n);
  for (std::int64_t t = 1; t <= n; ++t) {
    c.sigmas[t - 1] = lambda / OgdStepSize(c, t);
  }
  c.Validate();
  return c;
}

void OgdConfig::Validate() const {
  if (n < 1) throw DomainError("OgdConfig: n must be >= 1");
  if (dimension < 1) throw DomainError("OgdConfig: dimension must be >= 1");
  CheckPositive(grad_bound, "gradient bound M");
  CheckPositive(domain_diameter, "dia(W)");
  CheckPositive(b, "B");
  if (static_cast<std::int64_t>(sigmas.size()) != n) {
    throw ShapeError("OgdConfig: expected " + std::to_string(n) +
                     " noise scales, got " + std::to_string(sigmas.size()));
  }
  for (double s : sigmas) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw DomainError("OgdConfig: sigma_t must be finite and >= 0");
    }
  }
  if (!(psi >= 0.0)) throw DomainError("OgdConfig: psi must be >= 0");
  if (b < domain_diameter) {
    throw DomainError("OgdConfig: B must be >= dia(W)");
  }
  if (step_image_diameter < 0.0) {
    throw DomainError("OgdConfig: step image diameter must be >= 0");
  }
}

double OgdStepSize(const OgdConfig& config, std::int64_t t) {
  if (t < 1 || t > config.n) {
    throw DomainError("OgdStepSize: t = " + std::to_string(t) +
                      " outside [1, " + std::to_string(config.n) + "]");
  }
  return config.domain_diameter /
         (config.grad_bound * std::sqrt(static_cast<double>(t)));
}

double OgdSensitivityBound(const OgdConfig& config, std::int64_t t) {
  return 2.0 * OgdStepSize(config, t) * config.grad_bound;
}

double StochasticRegretBound(const OgdConfig& config) {
  config.Validate();
  const double n = static_cast<double>(config.n);
  double noise = 0.0;
  for (std::int64_t t = 1; t <= config.n; ++t) {
    const double s = config.sigmas[t - 1];
    noise += OgdStepSize(config, t) * s * s;
  }
  return 3.0 * config.grad_bound * config.domain_diameter / (2.0 * std::sqrt(n)) +
         static_cast<double>(config.dimension) / (2.0 * n) * noise;
}

Tradeoff TradeoffConstantSigma(const OgdConfig& config, double epsilon) {
  config.Validate();
  const double sigma = config.sigmas.front();
  for (double s : config.sigmas) {
    if (std::abs(s - sigma) > 1e-12 * std::max(1.0, sigma)) {
      throw DomainError("TradeoffConstantSigma: sigma_t is not constant");
    }
  }
  if (!(sigma > 0.0)) {
    throw DomainError("TradeoffConstantSigma: sigma must be positive");
  }
  const GammaLevel level = GammaLevel::FromEpsilon(epsilon);
  const double m = config.grad_bound;
  const double root_n = std::sqrt(static_cast<double>(config.n));
  const double utility =
      config.b / root_n *
      (1.5 * m + static_cast<double>(config.dimension) * sigma * sigma / m);
  return GeometricTradeoff(config.n, level,
                           config.psi * m * root_n / (config.b * sigma),
                           m * root_n / sigma, utility);
}

Tradeoff TradeoffConstantLambda(const OgdConfig& config, double epsilon) {
  config.Validate();
  const double lambda = OgdStepSize(config, 1) * config.sigmas.front();
  for (std::int64_t t = 1; t <= config.n; ++t) {
    const double l = OgdStepSize(config, t) * config.sigmas[t - 1];
    if (std::abs(l - lambda) > 1e-9 * lambda) {
      throw DomainError("TradeoffConstantLambda: eta_t sigma_t is not constant");
    }
  }
  if (!(lambda > 0.0)) {
    throw DomainError("TradeoffConstantLambda: lambda must be positive");
  }
  const GammaLevel level = GammaLevel::FromEpsilon(epsilon);
  const double root_n = std::sqrt(static_cast<double>(config.n));
  const double utility =
      0.5 * config.grad_bound *
      (3.0 * config.image_diameter() / root_n +
       static_cast<double>(config.dimension) * lambda * lambda * root_n /
           config.b);
  return GeometricTradeoff(config.n, level, config.psi / lambda,
                           config.b / lambda, utility);
}

RegretEstimate SimulateOgdRegret(const QuadraticFamily& family,
                                 const OgdConfig& config, std::int64_t trials,
                                 std::uint64_t seed, int shards) {
  config.Validate();
  if (config.dimension != 1) {
    throw DomainError("SimulateOgdRegret: only dimension 1 is simulated");
  }
  if (trials < 100) {
    throw DomainError("SimulateOgdRegret: trials must be >= 100");
  }
  if (shards < 1) throw DomainError("SimulateOgdRegret: shards must be >= 1");
  if (!(family.center_lo >= 0.0 && family.center_lo <= family.center_hi &&
        family.center_hi <= config.domain_diameter)) {
    throw DomainError("SimulateOgdRegret: centers must satisfy 0 <= lo <= hi "
                      "<= dia(W)");
  }
  const double family_m = std::max(family.center_hi,
                                   config.domain_diameter - family.center_lo);
  if (!(family_m > 0.0)) {
    throw DomainError("SimulateOgdRegret: degenerate family with M = 0");
  }
  if (config.grad_bound < family_m * (1.0 - 1e-12)) {
    throw DomainError("SimulateOgdRegret: grad_bound " +
                      std::to_string(config.grad_bound) +
                      " is below the family's gradient bound " +
                      std::to_string(family_m));
  }

  std::vector<ShardSums> sums(shards);
#pragma omp parallel for schedule(static)
  for (int s = 0; s < shards; ++s) {
    const std::int64_t count = trials / shards + (s < trials % shards ? 1 : 0);
    sums[s] = RunShard(family, config, count, seed, s);
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& s : sums) {
    sum += s.sum;
    sum_sq += s.sum_sq;
  }
  const double k = static_cast<double>(trials);
  RegretEstimate out;
  out.trials = trials;
  out.mean = sum / k;
  const double variance = std::max(0.0, (sum_sq - k * out.mean * out.mean) / (k - 1.0));
  out.std_error = std::sqrt(variance / k);
  return out;
}

}  // namespace egamma
