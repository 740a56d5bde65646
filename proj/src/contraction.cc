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

#include "egamma/contraction.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "egamma/errors.h"

namespace egamma {
namespace {

// Kernels with at most this many rows are swept exhaustively.
constexpr std::size_t kBruteForceRows = 64;

// Absorbs summation rounding when comparing a pruning bound against the
// running maximum.
constexpr double kPruneMargin = 1e-11;

// E_gamma(mu K || nu K) as the positive mass of (mu - gamma nu) K. Pushing the
// signed difference through the kernel avoids the cancellation between two
// separately rounded output laws, which matters when E_gamma(mu || nu) is tiny.
double OutputEGamma(const DiscreteKernel& kernel, const DiscreteDistribution& mu,
                    const DiscreteDistribution& nu, double gamma) {
  std::vector<double> out(kernel.cols(), 0.0);
  for (std::size_t i = 0; i < kernel.rows(); ++i) {
    const double d = mu[i] - gamma * nu[i];
    if (d == 0.0) continue;
    const auto row = kernel.row(i);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += d * row[j];
  }
  double sum = 0.0;
  for (double x : out) sum += std::max(x, 0.0);
  return std::min(sum, 1.0);
}

// Ties are broken toward the lexicographically smallest (from, to) so the
// reported argmax does not depend on thread scheduling.
void Offer(RowPairMax& best, double value, std::size_t from, std::size_t to) {
  if (value > best.value ||
      (value == best.value &&
       (from < best.from || (from == best.from && to < best.to)))) {
    best = {value, from, to};
  }
}

RowPairMax BruteForce(const DiscreteKernel& kernel, double gamma) {
  const std::size_t n = kernel.rows();
  RowPairMax best{0.0, 0, n > 1 ? 1u : 0u};
#pragma omp parallel
  {
    RowPairMax local = best;
#pragma omp for schedule(dynamic)
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        Offer(local, EGammaSpan(kernel.row(i), kernel.row(j), gamma), i, j);
      }
    }
#pragma omp critical
    Offer(best, local.value, local.from, local.to);
  }
  return best;
}

// Splitting p - gamma q = (p - a r) + a (r - (gamma / a) q) gives, for every
// anchor row r and every level 1 <= a <= gamma,
//
//   E_gamma(p || q) <= E_a(p || r) + a E_{gamma / a}(r || q).
//
// a = 1 is the total-variation bound; once gamma > 1 that slack dwarfs the
// maximum, so a few intermediate levels are tried and the smallest bound wins.
RowPairMax Pruned(const DiscreteKernel& kernel, double gamma) {
  const std::size_t n = kernel.rows();
  const std::size_t m =
      static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n)))) +
      1;
  std::vector<std::size_t> anchors(m);
  for (std::size_t k = 0; k < m; ++k) {
    anchors[k] = static_cast<std::size_t>(std::llround(
        static_cast<double>(k) * static_cast<double>(n - 1) /
        static_cast<double>(m - 1)));
  }
  std::vector<double> levels = {1.0};
  if (gamma > 1.0) {
    for (double f : {1.0 / 32.0, 1.0 / 8.0, 0.5}) {
      levels.push_back(std::pow(gamma, f));
    }
  }
  const std::size_t nl = levels.size();

  // table[(l * m + k) * n + j] = a_l E_{gamma / a_l}(row(anchors[k]) || row(j)).
  std::vector<double> table(nl * m * n);
#pragma omp parallel for collapse(3) schedule(static)
  for (std::size_t l = 0; l < nl; ++l) {
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t j = 0; j < n; ++j) {
        table[(l * m + k) * n + j] =
            levels[l] *
            EGammaSpan(kernel.row(anchors[k]), kernel.row(j), gamma / levels[l]);
      }
    }
  }
  RowPairMax best{0.0, 0, 1};
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j != anchors[k]) Offer(best, table[k * n + j], anchors[k], j);
    }
  }

  // Nearest anchor in total variation for every row, and the slack
  // E_a(row(i) || anchor) at each level.
  std::vector<std::size_t> nearest(n);
  std::vector<double> slack(nl * n);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    double tv_min = 2.0;
    std::size_t arg = 0;
    for (std::size_t k = 0; k < m; ++k) {
      const double tv = TotalVariationSpan(kernel.row(i), kernel.row(anchors[k]));
      if (tv < tv_min) {
        tv_min = tv;
        arg = k;
      }
    }
    nearest[i] = arg;
    slack[i] = tv_min;
    for (std::size_t l = 1; l < nl; ++l) {
      slack[l * n + i] =
          EGammaSpan(kernel.row(i), kernel.row(anchors[arg]), levels[l]);
    }
  }

  const RowPairMax seed = best;
#pragma omp parallel
  {
    RowPairMax local = seed;
    std::vector<double> bound(n);
#pragma omp for schedule(dynamic, 8)
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        bound[j] = slack[i] + table[nearest[i] * n + j];
      }
      for (std::size_t l = 1; l < nl; ++l) {
        const double* row = table.data() + (l * m + nearest[i]) * n;
        const double s = slack[l * n + i];
        for (std::size_t j = 0; j < n; ++j) {
          bound[j] = std::min(bound[j], s + row[j]);
        }
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        // A zero bound means a zero value, which never displaces the argmax:
        // when the maximum is 0 the answer is the smallest pair (0, 1).
        if (bound[j] <= 0.0 || bound[j] + kPruneMargin < local.value) continue;
        Offer(local, EGammaSpan(kernel.row(i), kernel.row(j), gamma), i, j);
      }
    }
#pragma omp critical
    Offer(best, local.value, local.from, local.to);
  }
  return best;
}

}  // namespace

ProjectedGaussianKernelSpec::ProjectedGaussianKernelSpec(double domain_diameter,
                                                         double sigma)
    : domain_diameter_(domain_diameter), sigma_(sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("ProjectedGaussianKernelSpec: sigma must be positive");
  }
  if (!(domain_diameter >= 0.0) || !std::isfinite(domain_diameter)) {
    throw DomainError(
        "ProjectedGaussianKernelSpec: domain diameter must be >= 0");
  }
}

BinaryChannel::BinaryChannel(double a, double b) : a_(a), b_(b) {
  if (!(a >= 0.0 && a <= 0.5) || !(b >= 0.0 && b <= 0.5)) {
    throw DomainError("BinaryChannel: crossover probabilities must lie in "
                      "[0, 1/2]");
  }
}

DiscreteKernel BinaryChannel::ToKernel() const {
  return DiscreteKernel::FromRowMajor(2, 2, {1.0 - a_, a_, b_, 1.0 - b_});
}

DiscreteKernel::DiscreteKernel(const std::vector<DiscreteDistribution>& rows)
    : rows_(rows.size()), cols_(rows.empty() ? 0 : rows.front().size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) {
      throw ShapeError("DiscreteKernel: rows have different alphabet sizes");
    }
    data_.insert(data_.end(), row.probs().begin(), row.probs().end());
  }
}

DiscreteKernel DiscreteKernel::FromRowMajor(std::size_t rows, std::size_t cols,
                                            std::vector<double> data) {
  if (data.size() != rows * cols) {
    throw ShapeError("DiscreteKernel: data size " + std::to_string(data.size()) +
                     " does not match " + std::to_string(rows) + " x " +
                     std::to_string(cols));
  }
  if (rows > 0 && cols == 0) {
    throw ShapeError("DiscreteKernel: rows must be nonempty");
  }
  DiscreteKernel kernel;
  kernel.rows_ = rows;
  kernel.cols_ = cols;
  kernel.data_ = std::move(data);
  for (std::size_t i = 0; i < rows; ++i) {
    auto r = kernel.row(i);
    DiscreteDistribution(std::vector<double>(r.begin(), r.end()));
  }
  return kernel;
}

DiscreteDistribution DiscreteKernel::Apply(const DiscreteDistribution& mu) const {
  if (mu.size() != rows_) {
    throw ShapeError("DiscreteKernel::Apply: input size " +
                     std::to_string(mu.size()) + " != kernel rows " +
                     std::to_string(rows_));
  }
  constexpr std::size_t kChunk = 256;
  std::vector<double> out(cols_, 0.0);
  const std::size_t chunks = (cols_ + kChunk - 1) / kChunk;
#pragma omp parallel for schedule(static)
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t lo = c * kChunk;
    const std::size_t hi = std::min(cols_, lo + kChunk);
    for (std::size_t i = 0; i < rows_; ++i) {
      const double w = mu[i];
      if (w == 0.0) continue;
      const double* r = data_.data() + i * cols_;
      for (std::size_t j = lo; j < hi; ++j) out[j] += w * r[j];
    }
  }
  return DiscreteDistribution(std::move(out));
}

DiscreteKernel DiscreteKernel::Then(const DiscreteKernel& next) const {
  if (cols_ != next.rows_) {
    throw ShapeError("DiscreteKernel::Then: inner dimensions differ");
  }
  std::vector<double> out(rows_ * next.cols_, 0.0);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < rows_; ++i) {
    double* o = out.data() + i * next.cols_;
    for (std::size_t k = 0; k < cols_; ++k) {
      const double w = data_[i * cols_ + k];
      if (w == 0.0) continue;
      const double* r = next.data_.data() + k * next.cols_;
      for (std::size_t j = 0; j < next.cols_; ++j) o[j] += w * r[j];
    }
  }
  return FromRowMajor(rows_, next.cols_, std::move(out));
}

double EtaGammaProjectedGaussian(const ProjectedGaussianKernelSpec& spec,
                                 const GammaLevel& level) {
  return ThetaGamma(level, spec.domain_diameter() / spec.sigma());
}

double EtaGammaBinary(const BinaryChannel& channel, const GammaLevel& level) {
  const double g = level.gamma();
  const double a = channel.a();
  const double b = channel.b();
  return std::max({1.0 - a - g * b, 1.0 - b - g * a, 0.0});
}

RowPairMax EtaGammaDiscreteArgmax(const DiscreteKernel& kernel,
                                  const GammaLevel& level) {
  if (kernel.rows() == 0) {
    throw ShapeError("EtaGammaDiscrete: kernel has no rows");
  }
  if (kernel.rows() == 1) return {0.0, 0, 0};
  return kernel.rows() <= kBruteForceRows ? BruteForce(kernel, level.gamma())
                                          : Pruned(kernel, level.gamma());
}

double EtaGammaDiscrete(const DiscreteKernel& kernel, const GammaLevel& level) {
  return EtaGammaDiscreteArgmax(kernel, level).value;
}

SdpiReport VerifySdpiDiscrete(const DiscreteKernel& kernel,
                              const GammaLevel& level, std::int64_t trials,
                              std::uint64_t seed) {
  if (trials < 1) throw DomainError("VerifySdpiDiscrete: trials must be >= 1");
  if (kernel.rows() == 0) {
    throw ShapeError("VerifySdpiDiscrete: kernel has no rows");
  }
  const std::size_t n = kernel.rows();
  SdpiReport report;
  report.eta = EtaGammaDiscrete(kernel, level);

  // Samples are drawn serially so the stream does not depend on threading.
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> exponential(1.0);
  auto dirichlet = [&] {
    std::vector<double> p(n);
    double sum = 0.0;
    for (double& x : p) sum += (x = exponential(rng));
    for (double& x : p) x /= sum;
    // Fold the normalization residue into the largest entry.
    double total = 0.0;
    for (double x : p) total += x;
    *std::max_element(p.begin(), p.end()) += 1.0 - total;
    return DiscreteDistribution(std::move(p));
  };
  std::vector<DiscreteDistribution> mus;
  std::vector<DiscreteDistribution> nus;
  mus.reserve(trials);
  nus.reserve(trials);
  for (std::int64_t t = 0; t < trials; ++t) {
    mus.push_back(dirichlet());
    nus.push_back(dirichlet());
  }

  std::vector<double> ratios(trials, -1.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < trials; ++t) {
    const double input = EGammaDiscrete(mus[t], nus[t], level);
    if (input > 0.0) {
      ratios[t] =
          OutputEGamma(kernel, mus[t], nus[t], level.gamma()) / input;
    }
  }
  for (double r : ratios) {
    if (r < 0.0) continue;
    ++report.valid_trials;
    report.max_ratio = std::max(report.max_ratio, r);
  }
  if (report.valid_trials == 0) {
    throw SamplingError(
        "VerifySdpiDiscrete: no sampled pair had positive E_gamma divergence");
  }

  for (std::size_t i = 0; i < n; ++i) {
    const auto out_i = kernel.Apply(DiscreteDistribution::PointMass(n, i));
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto in_j = DiscreteDistribution::PointMass(n, j);
      const double input =
          EGammaDiscrete(DiscreteDistribution::PointMass(n, i), in_j, level);
      const double ratio =
          EGammaDiscrete(out_i, kernel.Apply(in_j), level) / input;
      report.point_mass_max = std::max(report.point_mass_max, ratio);
    }
  }
  report.achievability_gap = std::abs(report.point_mass_max - report.eta);
  report.holds = report.max_ratio <= report.eta + kSdpiRatioSlack &&
                 report.achievability_gap <= kAchievabilityTolerance;
  return report;
}

QuadratureResult FDivergenceUpperBound(const GammaCurve& eta_curve,
                                       const GammaCurve& second_derivative,
                                       const GammaCurve& curve_mu_nu,
                                       const GammaCurve& curve_nu_mu,
                                       const EGammaIntegralOptions& options) {
  return WeightedEGammaIntegral(eta_curve, second_derivative, curve_mu_nu,
                                curve_nu_mu, options);
}

QuadratureResult Chi2UpperBound(const GammaCurve& eta_curve,
                                const GammaCurve& curve_mu_nu,
                                const GammaCurve& curve_nu_mu,
                                const EGammaIntegralOptions& options) {
  return FDivergenceUpperBound(
      eta_curve, [](double) { return 2.0; }, curve_mu_nu, curve_nu_mu, options);
}

}  // namespace egamma
