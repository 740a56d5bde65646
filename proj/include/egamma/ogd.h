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

// Privacy and utility of randomly stopped noisy online gradient descent,
//
//   W_{t+1} = Proj_W(W_t - eta_t grad f_t(W_t) + eta_t sigma_t Z_t),
//   eta_t = dia(W) / (M sqrt(t)).

#ifndef EGAMMA_OGD_H_
#define EGAMMA_OGD_H_

#include <cstdint>
#include <vector>

namespace egamma {

struct OgdConfig {
  std::int64_t n = 1;
  double grad_bound = 1.0;       // M, sup of ||grad f||
  double domain_diameter = 1.0;  // dia(W)
  std::int64_t dimension = 1;    // d
  std::vector<double> sigmas;    // sigma_t, t = 1..n
  double psi = 0.0;              // update sensitivity
  double b = 1.0;                // max{dia(W), max_t dia(Psi_t(W))}
  // max_t dia(Psi_t(W)); the constant-lambda utility bound is stated with
  // it. Defaults to b when left at 0.
  double step_image_diameter = 0.0;

  // sigma_t = sigma for every t.
  static OgdConfig ConstantSigma(std::int64_t n, double grad_bound,
                                 double domain_diameter,
                                 std::int64_t dimension, double sigma,
                                 double psi, double b);
  // sigma_t = lambda / eta_t, so that eta_t sigma_t = lambda.
  static OgdConfig ConstantLambda(std::int64_t n, double grad_bound,
                                  double domain_diameter,
                                  std::int64_t dimension, double lambda,
                                  double psi, double b);

  void Validate() const;
  double image_diameter() const {
    return step_image_diameter > 0.0 ? step_image_diameter : b;
  }
};

// dia(W) / (M sqrt(t)) for 1 <= t <= n.
double OgdStepSize(const OgdConfig& config, std::int64_t t);

// 2 eta_t M, the sensitivity of the step-t update. Step dependent; the
// tradeoff formulas below take psi as a constant from the config.
double OgdSensitivityBound(const OgdConfig& config, std::int64_t t);

// 3 M dia / (2 sqrt(n)) + (d / (2n)) sum_t eta_t sigma_t^2.
double StochasticRegretBound(const OgdConfig& config);

struct Tradeoff {
  double delta = 0.0;
  double log10_delta = 0.0;
  double utility_bound = 0.0;
};

// Constant sigma: delta = (1/n) theta(psi M sqrt(n) / (B sigma))
// [1 - theta(M sqrt(n) / sigma)]^{-1}, SR <= (B / sqrt(n)) (3M/2 + d sigma^2 /
// M). Throws DomainError if the sigmas are not constant.
Tradeoff TradeoffConstantSigma(const OgdConfig& config, double epsilon);

// Constant lambda = eta_t sigma_t: delta = (1/n) theta(psi / lambda)
// [1 - theta(B / lambda)]^{-1}, SR <= (M/2)(3D / sqrt(n) + d lambda^2 sqrt(n)
// / B). Throws DomainError if eta_t sigma_t is not constant.
Tradeoff TradeoffConstantLambda(const OgdConfig& config, double epsilon);

// 1-D quadratic costs f_t(w) = (w - c_t)^2 / 2 with centers c_t drawn
// uniformly from [center_lo, center_hi], on W = [0, dia(W)].
struct QuadraticFamily {
  double center_lo = 0.0;
  double center_hi = 1.0;
};

struct RegretEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
};

// Monte Carlo estimate of SR(n) = E[f(W_T)] - min_W f with T uniform on [n]
// and W_1 = 0. Trials are split over `shards` independent streams seeded from
// (seed, shard); results are reproducible for a fixed (seed, shards).
// Requires dimension 1 and trials >= 100.
RegretEstimate SimulateOgdRegret(const QuadraticFamily& family,
                                 const OgdConfig& config, std::int64_t trials,
                                 std::uint64_t seed, int shards = 8);

}  // namespace egamma

#endif  // EGAMMA_OGD_H_
