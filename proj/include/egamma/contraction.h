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

// Contraction coefficients eta_gamma(K) of Markov kernels under E_gamma.
//
// For any kernel, eta_gamma(K) = sup over input pairs (w1, w2) of
// E_gamma(K(w1) || K(w2)); the sup runs over ordered pairs because E_gamma is
// not symmetric once gamma > 1. The projected additive Gaussian kernel
// w -> Proj_W(w + sigma Z) restricted to inputs of diameter D has
// eta_gamma = theta_gamma(D / sigma).

#ifndef EGAMMA_CONTRACTION_H_
#define EGAMMA_CONTRACTION_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "egamma/divergences.h"

namespace egamma {

class ProjectedGaussianKernelSpec {
 public:
  ProjectedGaussianKernelSpec(double domain_diameter, double sigma);

  double domain_diameter() const { return domain_diameter_; }
  double sigma() const { return sigma_; }

 private:
  double domain_diameter_;
  double sigma_;
};

class DiscreteKernel;

// Binary-input binary-output channel [[1 - a, a], [b, 1 - b]] with
// crossover probabilities a, b in [0, 1/2].
class BinaryChannel {
 public:
  BinaryChannel(double a, double b);

  double a() const { return a_; }
  double b() const { return b_; }
  DiscreteKernel ToKernel() const;

 private:
  double a_;
  double b_;
};

// Row-stochastic matrix; row i is the output law for input symbol i.
class DiscreteKernel {
 public:
  DiscreteKernel() = default;
  explicit DiscreteKernel(const std::vector<DiscreteDistribution>& rows);

  // Validates every row as a DiscreteDistribution.
  static DiscreteKernel FromRowMajor(std::size_t rows, std::size_t cols,
                                     std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> data() const { return data_; }

  // mu K. Throws ShapeError unless mu.size() == rows().
  DiscreteDistribution Apply(const DiscreteDistribution& mu) const;

  // The kernel "this, then next". Throws ShapeError unless
  // cols() == next.rows().
  DiscreteKernel Then(const DiscreteKernel& next) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// theta_gamma(domain_diameter / sigma).
double EtaGammaProjectedGaussian(const ProjectedGaussianKernelSpec& spec,
                                 const GammaLevel& level);

// max{(1 - a - gamma b)^+, (1 - b - gamma a)^+}.
double EtaGammaBinary(const BinaryChannel& channel, const GammaLevel& level);

struct RowPairMax {
  double value = 0.0;
  std::size_t from = 0;  // E_gamma(row(from) || row(to)) attains the max
  std::size_t to = 0;
};

// max over ordered row pairs of E_gamma(row_i || row_j). Large kernels are
// swept in parallel with an exact anchor-based pruning: for any anchor row r,
// E_gamma(p || q) <= TV(p, r) + E_gamma(r || q), so pairs whose bound cannot
// beat the running maximum are skipped. Throws ShapeError on an empty kernel.
RowPairMax EtaGammaDiscreteArgmax(const DiscreteKernel& kernel,
                                  const GammaLevel& level);
double EtaGammaDiscrete(const DiscreteKernel& kernel, const GammaLevel& level);

struct SdpiReport {
  double max_ratio = 0.0;        // over sampled (mu, nu) pairs
  double eta = 0.0;              // EtaGammaDiscrete(kernel, level)
  double point_mass_max = 0.0;   // max ratio over pairs of point masses
  double achievability_gap = 0.0;
  std::int64_t valid_trials = 0;
  bool holds = false;
};

inline constexpr double kSdpiRatioSlack = 1e-10;
inline constexpr double kAchievabilityTolerance = 1e-12;

// Draws `trials` pairs (mu, nu) from a symmetric Dirichlet(1) law, keeps those
// with E_gamma(mu || nu) > 0 and records the largest ratio
// E_gamma(mu K || nu K) / E_gamma(mu || nu). Also evaluates the ratio on every
// ordered pair of point masses, which must reproduce eta exactly. Throws
// SamplingError if no sampled pair has positive input divergence.
SdpiReport VerifySdpiDiscrete(const DiscreteKernel& kernel,
                              const GammaLevel& level, std::int64_t trials,
                              std::uint64_t seed);

// Output f-divergence bound through a kernel with contraction curve
// `eta_curve`: the weighted E_gamma integral with weight eta_gamma(K).
QuadratureResult FDivergenceUpperBound(const GammaCurve& eta_curve,
                                       const GammaCurve& second_derivative,
                                       const GammaCurve& curve_mu_nu,
                                       const GammaCurve& curve_nu_mu,
                                       const EGammaIntegralOptions& options);

// Same with f(t) = (t - 1)^2, i.e. f'' = 2.
QuadratureResult Chi2UpperBound(const GammaCurve& eta_curve,
                                const GammaCurve& curve_mu_nu,
                                const GammaCurve& curve_nu_mu,
                                const EGammaIntegralOptions& options);

}  // namespace egamma

#endif  // EGAMMA_CONTRACTION_H_
