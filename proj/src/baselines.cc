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

#include "egamma/baselines.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "egamma/errors.h"

namespace egamma {
namespace {

constexpr int kScanPoints = 512;
constexpr double kAlphaFloor = 1.0 + 1e-6;
constexpr double kGoldenTol = 1e-12;

BaselineDelta FromLog(double log_delta, double alpha) {
  BaselineDelta out;
  out.alpha = alpha;
  if (log_delta > 0.0) {
    out.clamped = true;
    log_delta = 0.0;
  }
  out.delta = std::exp(log_delta);
  out.log10_delta = log_delta / std::numbers::ln10;
  return out;
}

}  // namespace

RdpGuarantee::RdpGuarantee(double alpha, double zeta)
    : alpha_(alpha), zeta_(zeta) {
  if (!(alpha > 1.0)) throw DomainError("RdpGuarantee: alpha must exceed 1");
  if (!(zeta >= 0.0)) throw DomainError("RdpGuarantee: zeta must be >= 0");
}

FeldmanParams::FeldmanParams(std::int64_t n, double lipschitz, double sigma)
    : n_(n), lipschitz_(lipschitz), sigma_(sigma) {
  if (n < 1) throw DomainError("FeldmanParams: n must be positive");
  if (!(lipschitz > 0.0) || !std::isfinite(lipschitz)) {
    throw DomainError("FeldmanParams: L must be positive");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("FeldmanParams: sigma must be positive");
  }
}

double FeldmanParams::rho() const {
  return 4.0 * lipschitz_ * lipschitz_ * std::log(static_cast<double>(n_)) /
         (static_cast<double>(n_) * sigma_ * sigma_);
}

double AlphaStar(const FeldmanParams& params) {
  const double ratio = params.sigma() / params.lipschitz();
  return 0.5 * (1.0 + std::sqrt(1.0 + 2.0 * ratio * ratio));
}

double FeldmanZeta(const FeldmanParams& params, double alpha) {
  if (params.n() < 2) {
    throw DomainError("FeldmanZeta: n must be >= 2 so that log n > 0");
  }
  const double alpha_star = AlphaStar(params);
  if (!(alpha > 1.0) || alpha > alpha_star * (1.0 + 1e-12)) {
    throw DomainError(
        "FeldmanZeta: alpha = " + std::to_string(alpha) +
        " violates sigma >= L sqrt(2 (alpha - 1) alpha); admissible range is "
        "(1, " + std::to_string(alpha_star) + "]");
  }
  return params.rho() * alpha;
}

RdpGuarantee FeldmanGuarantee(const FeldmanParams& params, double alpha) {
  return RdpGuarantee(alpha, FeldmanZeta(params, alpha));
}

BaselineDelta DeltaHat(const FeldmanParams& params, double epsilon) {
  if (params.n() < 2) throw DomainError("DeltaHat: n must be >= 2");
  if (!(epsilon >= 0.0)) throw DomainError("DeltaHat: epsilon must be >= 0");
  const double rho = params.rho();
  const double alpha_star = AlphaStar(params);
  const double ratio = params.sigma() / params.lipschitz();
  double alpha = alpha_star;
  if (epsilon * epsilon < rho * rho * (1.0 + 2.0 * ratio * ratio)) {
    alpha = std::clamp(0.5 + epsilon / (2.0 * rho), 1.0, alpha_star);
  }
  BaselineDelta out =
      FromLog(-(alpha - 1.0) * (epsilon - rho * alpha), alpha);
  if (alpha == 1.0) out.clamped = true;
  return out;
}

double LogDeltaCheckObjective(const FeldmanParams& params, double epsilon,
                              double alpha) {
  const double zeta = params.rho() * alpha;
  const double am1 = alpha - 1.0;
  const double log_kappa =
      -std::log(alpha) + am1 * std::log1p(-1.0 / alpha);
  const double first = log_kappa - am1 * (epsilon - zeta);
  const double second = std::log(std::expm1(am1 * zeta)) - std::log(alpha) -
                        std::log(std::expm1(am1 * epsilon));
  return std::min(first, second);
}

BaselineDelta DeltaCheck(const FeldmanParams& params, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw DomainError("DeltaCheck: epsilon must be positive");
  }
  if (params.n() < 2) throw DomainError("DeltaCheck: n must be >= 2");
  const double hi = AlphaStar(params);
  auto objective = [&](double alpha) {
    return LogDeltaCheckObjective(params, epsilon, alpha);
  };
  if (hi <= kAlphaFloor) return FromLog(objective(hi), hi);

  const double step = (hi - kAlphaFloor) / (kScanPoints - 1);
  int best = 0;
  double best_value = objective(kAlphaFloor);
  for (int k = 1; k < kScanPoints; ++k) {
    const double v = objective(kAlphaFloor + k * step);
    if (v < best_value) {
      best_value = v;
      best = k;
    }
  }
  double a = kAlphaFloor + std::max(0, best - 1) * step;
  double b = kAlphaFloor + std::min(kScanPoints - 1, best + 1) * step;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = objective(c);
  double fd = objective(d);
  while (b - a > kGoldenTol * std::max(1.0, std::abs(a))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d);
    }
  }
  double alpha = 0.5 * (a + b);
  double value = objective(alpha);
  // The bracket endpoints are real candidates too (the minimum may sit on
  // alpha*).
  for (double x : {a, b, kAlphaFloor + best * step}) {
    const double v = objective(x);
    if (v < value) {
      value = v;
      alpha = x;
    }
  }
  return FromLog(value, alpha);
}

}  // namespace egamma
