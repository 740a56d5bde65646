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

// (epsilon, delta) accounting for noisy iterative processes
//
//   W_{t+1} = Proj_W(Psi_t(W_t) + sigma_t Z_t),  t = 1..n,
//
// by composing E_gamma contraction coefficients of the per-step projected
// Gaussian kernels, gamma = e^epsilon. All deltas are computed in the log
// domain and reported both as a probability and as log10.

#ifndef EGAMMA_ACCOUNTANT_H_
#define EGAMMA_ACCOUNTANT_H_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace egamma {

// Per-step effective noise scales sigma_t, per-step update-image diameters
// D_t = dia(Psi_t(W)), and the update sensitivity psi.
class IterationSchedule {
 public:
  IterationSchedule(std::vector<double> sigmas,
                    std::vector<double> step_diameters, double psi);

  static IterationSchedule Constant(std::int64_t n, double sigma,
                                    double step_diameter, double psi);

  std::int64_t n() const { return static_cast<std::int64_t>(sigmas_.size()); }
  // 1-based, matching the step index t in [n].
  double sigma(std::int64_t t) const { return sigmas_[t - 1]; }
  double step_diameter(std::int64_t t) const { return step_diameters_[t - 1]; }
  double psi() const { return psi_; }

  double max_step_diameter() const;
  double min_sigma() const;

 private:
  std::vector<double> sigmas_;
  std::vector<double> step_diameters_;
  double psi_;
};

// Projected noisy SGD: W_{t+1} = Proj_W(W_t - eta [grad l(W_t, x_t) + sigma Z]).
// The noise actually injected has standard deviation eta * sigma.
struct PnsgdConfig {
  std::int64_t n = 1;
  double lipschitz = 1.0;
  std::optional<double> smoothness;
  double eta = 0.1;
  double sigma = 1.0;
  double domain_diameter = 1.0;

  // Throws DomainError on non-positive fields; with `smooth`, throws
  // PreconditionError unless smoothness is set and eta <= 2 / smoothness.
  void Validate(bool smooth) const;
};

class DpGuarantee {
 public:
  DpGuarantee(double epsilon, double delta);
  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }

 private:
  double epsilon_;
  double delta_;
};

struct DeltaValue {
  double delta = 0.0;
  double log10_delta = 0.0;
  // The raw bound exceeded 1 and was clamped.
  bool clamped = false;

  static DeltaValue FromLog(double log_delta);
};

enum class Aggregation {
  kPaperMin,   // min_i b_i, the literal randomly-stopped formula
  kSoundMax,   // max_i b_i, valid for every neighboring index
  kGeometric,  // closed form with D = max_t D_t and sigma = min_t sigma_t
};

std::string_view AggregationName(Aggregation mode);
// Accepts "paper-min", "sound-max", "geometric" (underscores also accepted).
Aggregation ParseAggregation(std::string_view name);

// theta(psi / sigma_i) prod_{t=i+1}^{n} theta(D_t / sigma_t) at
// gamma = e^epsilon, for 1 <= i <= n.
DeltaValue DeltaAtIndex(const IterationSchedule& schedule, std::int64_t index,
                        double epsilon);

// log b_i for i = 1..n (element i - 1), where
//   b_i = (1/n) theta(psi / sigma_i) sum_{t=i}^{n} prod_{j=i+1}^{t}
//         theta(D / sigma_j),  D = max_t D_t.
std::vector<double> RandomlyStoppedLogBounds(const IterationSchedule& schedule,
                                             double epsilon);

struct RandomlyStoppedDelta {
  DeltaValue value;
  Aggregation mode = Aggregation::kSoundMax;
  // 1-based index selecting min/max; 0 in geometric mode.
  std::int64_t index = 0;
};

// Throws NumericalError in geometric mode when theta(D / sigma) == 1.
RandomlyStoppedDelta DeltaRandomlyStopped(
    const IterationSchedule& schedule, double epsilon,
    Aggregation mode = Aggregation::kSoundMax);

// The schedule PNSGD induces: sigma_t = eta sigma, psi = 2 eta L and
// D_t = dia + 2 eta L, or D_t = dia for the smooth variant (the gradient step
// is 1-Lipschitz when eta <= 2 / beta).
IterationSchedule PnsgdSchedule(const PnsgdConfig& config, bool smooth);

// (1/n) theta(2L / sigma) [1 - theta(D / (eta sigma))]^{-1}.
DeltaValue PnsgdDelta(const PnsgdConfig& config, double epsilon, bool smooth);

}  // namespace egamma

#endif  // EGAMMA_ACCOUNTANT_H_
