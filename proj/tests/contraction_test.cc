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
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "egamma/contraction.h"
#include "egamma/divergences.h"
#include "egamma/errors.h"
#include "egamma/oracles.h"
#include "egamma/reference.h"

namespace egamma {
namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 61>;

DiscreteKernel RandomKernel(std::size_t rows, std::size_t cols,
                            std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> data(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < cols; ++j) sum += (data[i * cols + j] = e(rng));
    for (std::size_t j = 0; j < cols; ++j) data[i * cols + j] /= sum;
  }
  return DiscreteKernel::FromRowMajor(rows, cols, std::move(data));
}

TEST(BinaryChannelTest, Examples) {
  EXPECT_NEAR(EtaGammaBinary(BinaryChannel(0.1, 0.4), GammaLevel(1.0)), 0.5,
              1e-15);
  EXPECT_EQ(EtaGammaBinary(BinaryChannel(0.5, 0.5), GammaLevel(1.0)), 0.0);
  EXPECT_EQ(EtaGammaBinary(BinaryChannel(0.5, 0.5), GammaLevel(7.0)), 0.0);
  EXPECT_NEAR(EtaGammaBinary(BinaryChannel(0.1, 0.4), GammaLevel(2.0)), 0.4,
              1e-15);
  EXPECT_THROW(BinaryChannel(-0.1, 0.4), DomainError);
  EXPECT_THROW(BinaryChannel(0.1, 1.4), DomainError);
}

TEST(BinaryChannelTest, AgreesWithRowPairSup) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const BinaryChannel channel(0.5 * unit(rng), 0.5 * unit(rng));
    const GammaLevel level(1.0 + 3.0 * unit(rng));
    EXPECT_NEAR(EtaGammaBinary(channel, level),
                EtaGammaDiscrete(channel.ToKernel(), level), 1e-15);
  }
}

TEST(EtaGammaDiscreteTest, Examples) {
  const auto identity = DiscreteKernel::FromRowMajor(2, 2, {1, 0, 0, 1});
  EXPECT_EQ(EtaGammaDiscrete(identity, GammaLevel(2.0)), 1.0);
  const auto equal = DiscreteKernel::FromRowMajor(3, 2, {0.3, 0.7, 0.3, 0.7, 0.3, 0.7});
  for (double g : {1.0, 2.0, 9.0}) {
    EXPECT_EQ(EtaGammaDiscrete(equal, GammaLevel(g)), 0.0);
  }
  const auto binary = DiscreteKernel::FromRowMajor(2, 2, {0.9, 0.1, 0.4, 0.6});
  EXPECT_NEAR(EtaGammaDiscrete(binary, GammaLevel(2.0)), 0.4, 1e-15);
  EXPECT_THROW(EtaGammaDiscrete(DiscreteKernel(), GammaLevel(1.0)), ShapeError);
  EXPECT_THROW(DiscreteKernel::FromRowMajor(2, 2, {1, 0, 0}), ShapeError);
}

TEST(EtaGammaDiscreteTest, DobrushinAtGammaOne) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const auto kernel = RandomKernel(6, 4, rng);
    double tv = 0.0;
    for (std::size_t i = 0; i < 6; ++i) {
      for (std::size_t j = 0; j < 6; ++j) {
        tv = std::max(tv, TotalVariationSpan(kernel.row(i), kernel.row(j)));
      }
    }
    EXPECT_NEAR(EtaGammaDiscrete(kernel, GammaLevel(1.0)), tv, 1e-15);
  }
}

// Kernels above the brute-force threshold go through the pruned sweep.
TEST(EtaGammaDiscreteTest, PrunedSweepMatchesBruteForce) {
  std::mt19937_64 rng(29);
  for (std::size_t rows : {65, 97, 150}) {
    const auto kernel = RandomKernel(rows, 12, rng);
    for (double g : {1.0, 1.2, std::numbers::e, std::exp(2.0)}) {
      const auto fast = EtaGammaDiscreteArgmax(kernel, GammaLevel(g));
      const auto slow = reference::EtaGammaDiscreteArgmax(kernel, GammaLevel(g));
      EXPECT_EQ(fast.value, slow.value) << rows << " " << g;
      EXPECT_EQ(fast.from, slow.from) << rows << " " << g;
      EXPECT_EQ(fast.to, slow.to) << rows << " " << g;
    }
  }
}

TEST(EtaGammaDiscreteTest, PrunedSweepMatchesBruteForceOnGridKernels) {
  const Grid1D grid(0.0, 1.0, 301);
  const auto identity = [](double w) { return w; };
  for (double sigma : {0.2, 1.0, 3.0}) {
    const auto kernel = GridKernel(identity, sigma, grid);
    for (double eps : {0.0, 0.5, 1.0, 2.0}) {
      const GammaLevel level = GammaLevel::FromEpsilon(eps);
      const auto fast = EtaGammaDiscreteArgmax(kernel, level);
      const auto slow = reference::EtaGammaDiscreteArgmax(kernel, level);
      EXPECT_EQ(fast.value, slow.value) << sigma << " " << eps;
      EXPECT_EQ(fast.from, slow.from) << sigma << " " << eps;
      EXPECT_EQ(fast.to, slow.to) << sigma << " " << eps;
    }
  }
}

TEST(EtaGammaDiscreteTest, NonincreasingInGammaAndDominatedByTv) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const auto kernel = RandomKernel(5, 5, rng);
    const double tv = EtaGammaDiscrete(kernel, GammaLevel(1.0));
    double prev = tv;
    for (double g = 1.1; g < 6.0; g += 0.1) {
      const double eta = EtaGammaDiscrete(kernel, GammaLevel(g));
      EXPECT_LE(eta, prev);
      EXPECT_LE(eta, tv);
      prev = eta;
    }
  }
}

TEST(EtaGammaDiscreteTest, SubmultiplicativeUnderComposition) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 50; ++trial) {
    const auto first = RandomKernel(5, 4, rng);
    const auto second = RandomKernel(4, 6, rng);
    for (double g : {1.0, 1.5, std::numbers::e}) {
      const GammaLevel level(g);
      EXPECT_LE(EtaGammaDiscrete(first.Then(second), level),
                EtaGammaDiscrete(first, level) * EtaGammaDiscrete(second, level) +
                    1e-15);
    }
  }
}

TEST(SdpiTest, RandomKernel) {
  std::mt19937_64 rng(7);
  const auto kernel = RandomKernel(5, 5, rng);
  const SdpiReport report = VerifySdpiDiscrete(kernel, GammaLevel(1.5), 2000, 7);
  EXPECT_TRUE(report.holds);
  EXPECT_LE(report.max_ratio, report.eta + kSdpiRatioSlack);
  EXPECT_NEAR(report.point_mass_max, report.eta, 1e-12);
  EXPECT_GT(report.valid_trials, 1000);
}

TEST(SdpiTest, TrivialKernels) {
  const auto identity = DiscreteKernel::FromRowMajor(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  const SdpiReport id = VerifySdpiDiscrete(identity, GammaLevel(2.0), 200, 1);
  EXPECT_TRUE(id.holds);
  EXPECT_LE(id.max_ratio, 1.0 + 1e-12);
  const auto equal = DiscreteKernel::FromRowMajor(2, 2, {0.2, 0.8, 0.2, 0.8});
  const SdpiReport eq = VerifySdpiDiscrete(equal, GammaLevel(1.5), 200, 1);
  EXPECT_TRUE(eq.holds);
  EXPECT_EQ(eq.max_ratio, 0.0);
}

TEST(SdpiTest, Errors) {
  const auto identity = DiscreteKernel::FromRowMajor(2, 2, {1, 0, 0, 1});
  EXPECT_THROW(VerifySdpiDiscrete(identity, GammaLevel(1.0), 0, 1), DomainError);
  // A single-state input space has no pair with positive divergence.
  const auto single = DiscreteKernel::FromRowMajor(1, 2, {0.5, 0.5});
  EXPECT_THROW(VerifySdpiDiscrete(single, GammaLevel(1.0), 10, 1), SamplingError);
}

TEST(ProjectedGaussianTest, ClosedForm) {
  EXPECT_EQ(EtaGammaProjectedGaussian(ProjectedGaussianKernelSpec(0.0, 1.0),
                                      GammaLevel(3.0)),
            0.0);
  EXPECT_NEAR(EtaGammaProjectedGaussian(ProjectedGaussianKernelSpec(1.0, 1.0),
                                        GammaLevel(1.0)),
              QFunction(-0.5) - QFunction(0.5), 1e-15);
  EXPECT_THROW(ProjectedGaussianKernelSpec(1.0, 0.0), DomainError);
}

// E_gamma between the projections onto [0, 1] of N(1, s^2) and N(0, s^2):
// two boundary atoms plus the interior density difference.
double ProjectedPairOracle(double sigma, double gamma) {
  const double atom0_p = QFunction(1.0 / sigma), atom0_q = 0.5;
  const double atom1_p = 0.5, atom1_q = QFunction(1.0 / sigma);
  auto density = [sigma](double x) {
    return std::exp(-0.5 * x * x / (sigma * sigma)) /
           (sigma * std::sqrt(2.0 * std::numbers::pi));
  };
  const double interior = Kronrod::integrate(
      [&](double x) { return std::max(density(x - 1.0) - gamma * density(x), 0.0); },
      0.0, 1.0, 15, 1e-14);
  return std::max(atom0_p - gamma * atom0_q, 0.0) +
         std::max(atom1_p - gamma * atom1_q, 0.0) + interior;
}

// The grid sup approaches the projected-measure divergence, which the
// unprojected Gaussian quantity bounds from above.
TEST(ProjectedGaussianTest, GridOracleMatchesProjectedMeasures) {
  const Grid1D grid(0.0, 1.0, 1001);
  const auto identity = [](double w) { return w; };
  for (double sigma : {0.5, 1.0}) {
    const auto kernel = GridKernel(identity, sigma, grid);
    for (double g : {1.0, std::numbers::e}) {
      const double grid_eta = EtaGammaDiscrete(kernel, GammaLevel(g));
      EXPECT_NEAR(grid_eta, ProjectedPairOracle(sigma, g), 2e-3) << sigma << " " << g;
      EXPECT_LE(grid_eta, EtaGammaProjectedGaussian(
                              ProjectedGaussianKernelSpec(1.0, sigma),
                              GammaLevel(g)) + 1e-12);
    }
  }
  EXPECT_NEAR(ProjectedPairOracle(1.0, std::numbers::e),
              0.5 - std::numbers::e * QFunction(1.0), 1e-12);
}

// Piecewise-linear curves of the binary example, integrated directly.
TEST(Chi2BoundTest, BinaryExampleAgainstPiecewiseOracle) {
  const auto mu = DiscreteDistribution::Bernoulli(0.1);
  const auto nu = DiscreteDistribution::Bernoulli(0.4);
  const BinaryChannel channel(0.1, 0.4);
  EGammaIntegralOptions options;
  options.gamma_max = 6.0;
  options.breakpoints = {1.5, 2.25, 4.0};
  const double computed =
      Chi2UpperBound([&](double g) { return EtaGammaBinary(channel, GammaLevel(g)); },
                     [&](double g) { return EGammaDiscrete(mu, nu, GammaLevel(g)); },
                     [&](double g) { return EGammaDiscrete(nu, mu, GammaLevel(g)); },
                     options)
          .value;
  auto integrand = [](double g) {
    const double eta = std::max({0.6 - 0.1 * g, 0.9 - 0.4 * g, 0.0});
    return 2.0 * eta *
           (std::max(0.9 - 0.6 * g, 0.0) + std::max(0.4 - 0.1 * g, 0.0) / (g * g * g));
  };
  double oracle = 0.0;
  const double cuts[] = {1.0, 1.5, 2.25, 4.0, 6.0};
  for (int k = 0; k + 1 < 5; ++k) {
    oracle += Kronrod::integrate(integrand, cuts[k], cuts[k + 1], 15, 1e-14);
  }
  EXPECT_NEAR(computed, oracle, 1e-9);
  EXPECT_NEAR(computed, 0.175226, 1e-6);
}

TEST(Chi2BoundTest, GaussianExampleAgainstLogScaleQuadrature) {
  const GammaLevel one(1.0);
  const double computed =
      Chi2UpperBound([](double g) { return ThetaGamma(GammaLevel(g), 1.0); },
                     [](double g) { return ThetaGamma(GammaLevel(g), 2.0); },
                     [](double g) { return ThetaGamma(GammaLevel(g), 2.0); }, {})
          .value;
  // Substituting gamma = e^s turns the tail into a rapidly decaying integrand.
  auto integrand = [](double s) {
    const double g = std::exp(s);
    const double eta = ThetaGamma(GammaLevel(g), 1.0);
    const double curve = ThetaGamma(GammaLevel(g), 2.0);
    return eta * 2.0 * curve * (g + 1.0 / (g * g));
  };
  double oracle = 0.0;
  for (double s = 0.0; s < 25.0; s += 1.0) {
    oracle += Kronrod::integrate(integrand, s, s + 1.0, 6, 1e-10);
  }
  EXPECT_NEAR(computed, oracle, 1e-5);
  // The unrelaxed baseline has a closed form: TV coefficient times chi^2.
  EXPECT_NEAR(ThetaGamma(one, 1.0) * std::expm1(4.0), 20.524, 1e-3);
}

}  // namespace
}  // namespace egamma
