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

#include "egamma/reference.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "egamma/errors.h"

namespace egamma::reference {
namespace {

double Phi(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
double Upper(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

}  // namespace

RowPairMax EtaGammaDiscreteArgmax(const DiscreteKernel& kernel,
                                  const GammaLevel& level) {
  if (kernel.rows() == 0) throw ShapeError("empty kernel");
  RowPairMax best{0.0, 0, kernel.rows() > 1 ? 1u : 0u};
  for (std::size_t i = 0; i < kernel.rows(); ++i) {
    for (std::size_t j = 0; j < kernel.rows(); ++j) {
      if (i == j) continue;
      const double v = EGammaSpan(kernel.row(i), kernel.row(j), level.gamma());
      if (v > best.value) best = {v, i, j};
    }
  }
  return best;
}

DiscreteKernel GridKernel(const UpdateMap& update, double noise_std,
                          const Grid1D& grid) {
  if (!(noise_std > 0.0)) throw DomainError("noise_std must be positive");
  const std::int64_t n = grid.points();
  const double h = grid.h();
  std::vector<double> data(n * n);
  for (std::int64_t i = 0; i < n; ++i) {
    const double mean = update(grid.point(i));
    if (!std::isfinite(mean)) throw DomainError("non-finite update");
    for (std::int64_t k = 0; k < n; ++k) {
      const double a = k == 0 ? -INFINITY
                              : (grid.lo() + (k - 0.5) * h - mean) / noise_std;
      const double b = k == n - 1
                           ? INFINITY
                           : (grid.lo() + (k + 0.5) * h - mean) / noise_std;
      data[i * n + k] = a >= 0.0 ? Upper(a) - Upper(b) : Phi(b) - Phi(a);
      data[i * n + k] = std::max(data[i * n + k], 0.0);
    }
  }
  return DiscreteKernel::FromRowMajor(n, n, std::move(data));
}

DiscreteDistribution Apply(const DiscreteKernel& kernel,
                           const DiscreteDistribution& mu) {
  if (mu.size() != kernel.rows()) throw ShapeError("size mismatch");
  std::vector<double> out(kernel.cols(), 0.0);
  for (std::size_t i = 0; i < kernel.rows(); ++i) {
    const auto row = kernel.row(i);
    for (std::size_t j = 0; j < kernel.cols(); ++j) out[j] += mu[i] * row[j];
  }
  return DiscreteDistribution(std::move(out));
}

DiscreteDistribution Propagate(const GridProcessSpec& spec) {
  spec.Validate();
  DiscreteDistribution mu = spec.init;
  for (const auto& s : spec.steps) {
    mu = Apply(reference::GridKernel(s.update, s.noise_std, spec.grid), mu);
  }
  return mu;
}

RegretEstimate SimulateOgdRegret(const QuadraticFamily& family,
                                 const OgdConfig& config, std::int64_t trials,
                                 std::uint64_t seed, int shards) {
  config.Validate();
  if (config.dimension != 1 || trials < 100 || shards < 1) {
    throw DomainError("unsupported simulation parameters");
  }
  const double optimum = 0.5 * (family.center_lo + family.center_hi);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int s = 0; s < shards; ++s) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(s)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> center(family.center_lo,
                                                  family.center_hi);
    std::normal_distribution<double> noise(0.0, 1.0);
    const std::int64_t count = trials / shards + (s < trials % shards ? 1 : 0);
    double shard_sum = 0.0;
    double shard_sq = 0.0;
    for (std::int64_t k = 0; k < count; ++k) {
      double w = 0.0;
      double excess = 0.0;
      for (std::int64_t t = 1; t <= config.n; ++t) {
        excess += 0.5 * (w - optimum) * (w - optimum);
        const double eta = OgdStepSize(config, t);
        const double c = center(rng);
        const double z = noise(rng);
        w = std::clamp(w - eta * (w - c) + eta * config.sigmas[t - 1] * z, 0.0,
                       config.domain_diameter);
      }
      const double v = excess * (1.0 / static_cast<double>(config.n));
      shard_sum += v;
      shard_sq += v * v;
    }
    sum += shard_sum;
    sum_sq += shard_sq;
  }
  const double k = static_cast<double>(trials);
  RegretEstimate out;
  out.trials = trials;
  out.mean = sum / k;
  out.std_error =
      std::sqrt(std::max(0.0, (sum_sq - k * out.mean * out.mean) / (k - 1.0)) / k);
  return out;
}

}  // namespace egamma::reference
