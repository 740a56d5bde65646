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

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "egamma/accountant.h"
#include "egamma/baselines.h"
#include "egamma/errors.h"

namespace egamma {
namespace {

constexpr int kOraclePoints = 1'000'000;

// Minimum of f over a uniform grid on (1, alpha*].
template <typename F>
double GridMin(const FeldmanParams& p, F f) {
  const double hi = AlphaStar(p);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= kOraclePoints; ++k) {
    best = std::min(best, f(1.0 + (hi - 1.0) * k / kOraclePoints));
  }
  return best;
}

TEST(AlphaStarTest, ClosedForms) {
  EXPECT_NEAR(AlphaStar(FeldmanParams(100, 1.0, 2.0)), 2.0, 1e-15);
  EXPECT_NEAR(AlphaStar(FeldmanParams(100, 1.0, 1.0)), 0.5 * (1.0 + std::sqrt(3.0)), 1e-15);
  const double big = AlphaStar(FeldmanParams(100, 1.0, 1000.0));
  EXPECT_NEAR(big / (1000.0 / std::sqrt(2.0)), 1.0, 1e-3);
}

TEST(FeldmanZetaTest, Values) {
  const FeldmanParams p(100, 1.0, 3.0);
  EXPECT_NEAR(FeldmanZeta(p, 2.0), 8.0 * std::log(100.0) / 900.0, 1e-16);
  EXPECT_NEAR(FeldmanZeta(p, 2.0), 0.0409348, 1e-7);
  EXPECT_NEAR(FeldmanZeta(p, 1.0 + 1e-12), 4.0 * std::log(100.0) / 900.0, 1e-13);
  EXPECT_NEAR(FeldmanZeta(FeldmanParams(100, 1.0, 6.0), 2.0), FeldmanZeta(p, 2.0) / 4.0,
              1e-16);
}

TEST(FeldmanZetaTest, Errors) {
  const FeldmanParams p(100, 1.0, 3.0);
  EXPECT_THROW(FeldmanZeta(p, 1.0), DomainError);
  EXPECT_THROW(FeldmanZeta(p, AlphaStar(p) + 0.01), DomainError);
  EXPECT_THROW(FeldmanZeta(FeldmanParams(1, 1.0, 3.0), 2.0), DomainError);
  EXPECT_THROW(FeldmanParams(0, 1.0, 3.0), DomainError);
  EXPECT_THROW(FeldmanParams(10, 0.0, 3.0), DomainError);
  EXPECT_THROW(FeldmanParams(10, 1.0, -3.0), DomainError);
  EXPECT_THROW(RdpGuarantee(1.0, 0.1), DomainError);
  EXPECT_THROW(RdpGuarantee(2.0, -0.1), DomainError);
}

TEST(DeltaHatTest, ZeroEpsilonIsVacuous) {
  const BaselineDelta d = DeltaHat(FeldmanParams(100, 1.0, 3.0), 0.0);
  EXPECT_EQ(d.delta, 1.0);
  EXPECT_TRUE(d.clamped);
}

TEST(DeltaHatTest, BranchesMeetAtThreshold) {
  const FeldmanParams p(100, 1.0, 3.0);
  const double threshold = p.rho() * std::sqrt(1.0 + 2.0 * 9.0);
  EXPECT_NEAR(0.5 + threshold / (2.0 * p.rho()), AlphaStar(p), 1e-12);
  EXPECT_NEAR(DeltaHat(p, threshold * (1 - 1e-14)).log10_delta,
              DeltaHat(p, threshold).log10_delta, 1e-12);
}

TEST(DeltaHatTest, MatchesGridMinimization) {
  for (double sigma : {0.5, 3.0}) {
    const FeldmanParams p(100, 1.0, sigma);
    for (double eps : {0.05, 0.5, 4.0}) {
      const double rho = p.rho();
      const double oracle =
          GridMin(p, [&](double a) { return -(a - 1.0) * (eps - rho * a); });
      const BaselineDelta d = DeltaHat(p, eps);
      EXPECT_NEAR(d.log10_delta * std::log(10.0), std::min(oracle, 0.0),
                  1e-9 * std::max(1.0, std::abs(oracle)))
          << sigma << " " << eps;
    }
  }
}

TEST(DeltaCheckTest, MatchesGridMinimization) {
  for (double sigma : {1.0, 3.0}) {
    const FeldmanParams p(100, 1.0, sigma);
    for (double eps : {0.5, 2.0, 4.0}) {
      const double rho = p.rho();
      const double oracle = GridMin(p, [&](double a) {
        const double zeta = rho * a;
        const double kappa = std::pow(1.0 - 1.0 / a, a - 1.0) / a;
        return std::min(kappa * std::exp(-(a - 1.0) * (eps - zeta)),
                        std::expm1((a - 1.0) * zeta) / (a * std::expm1((a - 1.0) * eps)));
      });
      const BaselineDelta d = DeltaCheck(p, eps);
      EXPECT_NEAR(d.delta, std::min(oracle, 1.0), 1e-8 * oracle) << sigma << " " << eps;
    }
  }
}

TEST(DeltaCheckTest, NoWorseThanDeltaHat) {
  const FeldmanParams p(100, 1.0, 3.0);
  for (double eps = 0.25; eps <= 10.0; eps += 0.25) {
    EXPECT_LE(DeltaCheck(p, eps).delta, DeltaHat(p, eps).delta + 1e-12) << eps;
  }
}

TEST(DeltaCheckTest, Errors) {
  const FeldmanParams p(100, 1.0, 3.0);
  EXPECT_THROW(DeltaCheck(p, 0.0), DomainError);
  EXPECT_THROW(DeltaCheck(p, -1.0), DomainError);
  EXPECT_THROW(DeltaCheck(FeldmanParams(1, 1.0, 3.0), 1.0), DomainError);
  EXPECT_THROW(DeltaHat(p, -1.0), DomainError);
}

TEST(BaselineMonotonicityTest, EpsilonAndScale) {
  const FeldmanParams base(100, 1.0, 3.0);
  const FeldmanParams noisier(100, 1.0, 2.5);  // larger L^2 log n / (n sigma^2)
  double prev_hat = 1.0, prev_check = 1.0;
  for (double eps = 0.25; eps <= 10.0; eps += 0.25) {
    const double hat = DeltaHat(base, eps).delta;
    const double check = DeltaCheck(base, eps).delta;
    EXPECT_LE(hat, prev_hat);
    EXPECT_LE(check, prev_check * (1.0 + 1e-9));
    EXPECT_LE(hat, DeltaHat(noisier, eps).delta);
    prev_hat = hat;
    prev_check = check;
  }
}

// Once alpha_opt saturates, log delta-hat is affine in epsilon while the
// contraction bound keeps bending down.
TEST(RateSeparationTest, SaturatedBaselineIsLogLinear) {
  const FeldmanParams p(100, 1.0, 3.0);
  PnsgdConfig c;
  c.n = 100;
  c.smoothness = 1.0;
  c.eta = 0.1;
  c.sigma = 3.0;
  for (double eps = 3.0; eps <= 9.0; eps += 1.0) {
    const double second_hat = DeltaHat(p, eps + 1).log10_delta -
                              2 * DeltaHat(p, eps).log10_delta +
                              DeltaHat(p, eps - 1).log10_delta;
    EXPECT_LE(std::abs(second_hat), 1e-9) << eps;
    const double second_ours = PnsgdDelta(c, eps + 1, true).log10_delta -
                               2 * PnsgdDelta(c, eps, true).log10_delta +
                               PnsgdDelta(c, eps - 1, true).log10_delta;
    EXPECT_LT(second_ours, 0.0) << eps;
  }
}

}  // namespace
}  // namespace egamma
