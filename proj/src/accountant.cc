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

#include "egamma/accountant.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "egamma/divergences.h"
#include "egamma/errors.h"

namespace egamma {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double LogAddExp(double x, double y) {
  if (x == -kInf) return y;
  if (y == -kInf) return x;
  const double m = std::max(x, y);
  return m + std::log1p(std::exp(-std::abs(x - y)));
}

void CheckPositive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

IterationSchedule::IterationSchedule(std::vector<double> sigmas,
                                     std::vector<double> step_diameters,
                                     double psi)
    : sigmas_(std::move(sigmas)),
      step_diameters_(std::move(step_diameters)),
      psi_(psi) {
  if (sigmas_.empty()) {
    throw DomainError("IterationSchedule: horizon n must be >= 1");
  }
  if (sigmas_.size() != step_diameters_.size()) {
    throw ShapeError("IterationSchedule: " + std::to_string(sigmas_.size()) +
                     " noise scales but " +
                     std::to_string(step_diameters_.size()) + " diameters");
  }
  for (double s : sigmas_) CheckPositive(s, "IterationSchedule: sigma_t");
  for (double d : step_diameters_) {
    if (!(d >= 0.0) || !std::isfinite(d)) {
      throw DomainError("IterationSchedule: step diameters must be >= 0");
    }
  }
  if (!(psi_ >= 0.0) || !std::isfinite(psi_)) {
    throw DomainError("IterationSchedule: psi must be >= 0");
  }
}

IterationSchedule IterationSchedule::Constant(std::int64_t n, double sigma,
                                              double step_diameter,
                                              double psi) {
  if (n < 1) throw DomainError("IterationSchedule: horizon n must be >= 1");
  return IterationSchedule(std::vector<double>(n, sigma),
                           std::vector<double>(n, step_diameter), psi);
}

double IterationSchedule::max_step_diameter() const {
  return *std::max_element(step_diameters_.begin(), step_diameters_.end());
}

double IterationSchedule::min_sigma() const {
  return *std::min_element(sigmas_.begin(), sigmas_.end());
}

void PnsgdConfig::Validate(bool smooth) const {
  if (n < 1) throw DomainError("PnsgdConfig: n must be >= 1");
  CheckPositive(lipschitz, "PnsgdConfig: lipschitz constant");
  CheckPositive(eta, "PnsgdConfig: learning rate");
  CheckPositive(sigma, "PnsgdConfig: noise multiplier");
  CheckPositive(domain_diameter, "PnsgdConfig: domain diameter");
  if (smoothness) CheckPositive(*smoothness, "PnsgdConfig: smoothness");
  if (smooth) {
    if (!smoothness) {
      throw PreconditionError(
          "PNSGD smooth bound needs a smoothness constant beta");
    }
    if (eta > 2.0 / *smoothness) {
      throw PreconditionError(
          "PNSGD smooth bound needs eta <= 2 / beta (the gradient step is "
          "only then 1-Lipschitz); got eta = " +
          std::to_string(eta) + ", beta = " + std::to_string(*smoothness));
    }
  }
}

DpGuarantee::DpGuarantee(double epsilon, double delta)
    : epsilon_(epsilon), delta_(delta) {
  if (!(epsilon >= 0.0)) throw DomainError("DpGuarantee: epsilon must be >= 0");
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw DomainError("DpGuarantee: delta must lie in [0, 1]");
  }
}

DeltaValue DeltaValue::FromLog(double log_delta) {
  DeltaValue out;
  if (log_delta > 0.0) {
    out.clamped = true;
    log_delta = 0.0;
  }
  out.delta = std::exp(log_delta);
  out.log10_delta = log_delta / std::numbers::ln10;
  return out;
}

std::string_view AggregationName(Aggregation mode) {
  switch (mode) {
    case Aggregation::kPaperMin:
      return "paper-min";
    case Aggregation::kSoundMax:
      return "sound-max";
    case Aggregation::kGeometric:
      return "geometric";
  }
  return "unknown";
}

Aggregation ParseAggregation(std::string_view name) {
  std::string s(name);
  std::replace(s.begin(), s.end(), '_', '-');
  if (s == "paper-min") return Aggregation::kPaperMin;
  if (s == "sound-max") return Aggregation::kSoundMax;
  if (s == "geometric") return Aggregation::kGeometric;
  throw DomainError("unknown aggregation mode '" + std::string(name) +
                    "' (expected paper-min, sound-max or geometric)");
}

DeltaValue DeltaAtIndex(const IterationSchedule& schedule, std::int64_t index,
                        double epsilon) {
  if (index < 1 || index > schedule.n()) {
    throw DomainError("DeltaAtIndex: index " + std::to_string(index) +
                      " outside [1, " + std::to_string(schedule.n()) + "]");
  }
  const GammaLevel level = GammaLevel::FromEpsilon(epsilon);
  double log_delta =
      LogThetaGamma(level, schedule.psi() / schedule.sigma(index));
  for (std::int64_t t = index + 1; t <= schedule.n() && log_delta > -kInf;
       ++t) {
    log_delta += LogThetaGamma(level, schedule.step_diameter(t) /
                                          schedule.sigma(t));
  }
  return DeltaValue::FromLog(log_delta);
}

std::vector<double> RandomlyStoppedLogBounds(const IterationSchedule& schedule,
                                             double epsilon) {
  const GammaLevel level = GammaLevel::FromEpsilon(epsilon);
  const std::int64_t n = schedule.n();
  const double d = schedule.max_step_diameter();
  const double log_n = std::log(static_cast<double>(n));
  std::vector<double> out(n);
  // log S_i with S_n = 1 and S_i = 1 + theta(D / sigma_{i+1}) S_{i+1}.
  double log_sum = 0.0;
  for (std::int64_t i = n; i >= 1; --i) {
    if (i < n) {
      log_sum = LogAddExp(
          0.0, LogThetaGamma(level, d / schedule.sigma(i + 1)) + log_sum);
    }
    out[i - 1] = -log_n +
                 LogThetaGamma(level, schedule.psi() / schedule.sigma(i)) +
                 log_sum;
  }
  return out;
}

RandomlyStoppedDelta DeltaRandomlyStopped(const IterationSchedule& schedule,
                                          double epsilon, Aggregation mode) {
  RandomlyStoppedDelta out;
  out.mode = mode;
  if (mode == Aggregation::kGeometric) {
    const GammaLevel level = GammaLevel::FromEpsilon(epsilon);
    const double sigma = schedule.min_sigma();
    const double log_tail =
        LogThetaGammaComplement(level, schedule.max_step_diameter() / sigma);
    if (log_tail == -kInf) {
      throw NumericalError(
          "geometric randomly-stopped bound diverges: theta(D / sigma) == 1; "
          "use the paper-min or sound-max per-index modes");
    }
    out.value = DeltaValue::FromLog(
        -std::log(static_cast<double>(schedule.n())) +
        LogThetaGamma(level, schedule.psi() / sigma) - log_tail);
    return out;
  }
  const auto logs = RandomlyStoppedLogBounds(schedule, epsilon);
  const auto it = mode == Aggregation::kPaperMin
                      ? std::min_element(logs.begin(), logs.end())
                      : std::max_element(logs.begin(), logs.end());
  out.index = (it - logs.begin()) + 1;
  out.value = DeltaValue::FromLog(*it);
  return out;
}

IterationSchedule PnsgdSchedule(const PnsgdConfig& config, bool smooth) {
  config.Validate(smooth);
  const double psi = 2.0 * config.eta * config.lipschitz;
  const double diameter =
      smooth ? config.domain_diameter : config.domain_diameter + psi;
  return IterationSchedule::Constant(config.n, config.eta * config.sigma,
                                     diameter, psi);
}

DeltaValue PnsgdDelta(const PnsgdConfig& config, double epsilon, bool smooth) {
  config.Validate(smooth);
  const GammaLevel level = GammaLevel::FromEpsilon(epsilon);
  const double noise = config.eta * config.sigma;
  const double diameter =
      smooth ? config.domain_diameter
             : config.domain_diameter + 2.0 * config.eta * config.lipschitz;
  const double log_tail = LogThetaGammaComplement(level, diameter / noise);
  if (log_tail == -kInf) {
    throw NumericalError("PNSGD bound diverges: theta(D / (eta sigma)) == 1");
  }
  return DeltaValue::FromLog(
      -std::log(static_cast<double>(config.n)) +
      LogThetaGamma(level, 2.0 * config.lipschitz / config.sigma) - log_tail);
}

}  // namespace egamma
