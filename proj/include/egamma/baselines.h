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

// RDP-based comparison curves for randomly stopped PNSGD. The RDP guarantee
// is the privacy-amplification-by-iteration bound
//
//   zeta(alpha) = 4 alpha L^2 log(n) / (n sigma^2),
//   valid for sigma >= L sqrt(2 (alpha - 1) alpha), i.e. alpha <= alpha*,
//
// converted to (epsilon, delta) either with the classic conversion
// delta = e^{-(alpha-1)(epsilon-zeta)} (DeltaHat) or with the optimal
// conversion (DeltaCheck). Logarithms are natural throughout.

#ifndef EGAMMA_BASELINES_H_
#define EGAMMA_BASELINES_H_

#include <cstdint>

namespace egamma {

class RdpGuarantee {
 public:
  RdpGuarantee(double alpha, double zeta);
  double alpha() const { return alpha_; }
  double zeta() const { return zeta_; }

 private:
  double alpha_;
  double zeta_;
};

class FeldmanParams {
 public:
  FeldmanParams(std::int64_t n, double lipschitz, double sigma);

  std::int64_t n() const { return n_; }
  double lipschitz() const { return lipschitz_; }
  double sigma() const { return sigma_; }
  // 4 L^2 log(n) / (n sigma^2); zeta(alpha) = rho * alpha.
  double rho() const;

 private:
  std::int64_t n_;
  double lipschitz_;
  double sigma_;
};

// (1 + sqrt(1 + 2 sigma^2 / L^2)) / 2.
double AlphaStar(const FeldmanParams& params);

// Throws DomainError for n < 2 or alpha outside (1, alpha*].
double FeldmanZeta(const FeldmanParams& params, double alpha);
RdpGuarantee FeldmanGuarantee(const FeldmanParams& params, double alpha);

struct BaselineDelta {
  double delta = 1.0;
  double log10_delta = 0.0;
  double alpha = 1.0;  // minimizing order
  bool clamped = false;
};

// Closed-form minimizer of e^{-(alpha-1)(epsilon - rho alpha)} over
// (1, alpha*]. The unconstrained optimum 1/2 + epsilon / (2 rho) is clamped
// into [1, alpha*]; at alpha = 1 the bound is 1.
BaselineDelta DeltaHat(const FeldmanParams& params, double epsilon);

// inf over alpha in (1, alpha*] of
//   min{kappa e^{-(alpha-1)(epsilon-zeta)},
//       (e^{(alpha-1) zeta} - 1) / (alpha (e^{(alpha-1) epsilon} - 1))},
// kappa = (1/alpha)(1 - 1/alpha)^{alpha-1}. A 512-point scan on
// [1 + 1e-6, alpha*] brackets the minimum and golden-section search refines
// it. Throws DomainError unless epsilon > 0.
BaselineDelta DeltaCheck(const FeldmanParams& params, double epsilon);

// log of the DeltaCheck objective at a given alpha; exposed for tests.
double LogDeltaCheckObjective(const FeldmanParams& params, double epsilon,
                              double alpha);

}  // namespace egamma

#endif  // EGAMMA_BASELINES_H_
