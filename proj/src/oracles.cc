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

#include "egamma/oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "egamma/errors.h"

namespace egamma {
namespace {

// Fills `out` with the grid law of Proj_W(mean + sd Z). Boundary k separates
// grid points k and k + 1.
void FillRow(double mean, double sd, const Grid1D& grid, double* out) {
  const std::int64_t n = grid.points();
  const double h = grid.h();
  // Lower and upper tails at the previous boundary; the first cell starts at
  // -infinity.
  double prev_z = -std::numeric_limits<double>::infinity();
  double prev_lower = 0.0;
  double prev_upper = 1.0;
  for (std::int64_t k = 0; k < n; ++k) {
    double z;
    double lower;
    double upper;
    if (k == n - 1) {
      z = std::numeric_limits<double>::infinity();
      lower = 1.0;
      upper = 0.0;
    } else {
      const double boundary = grid.lo() + (static_cast<double>(k) + 0.5) * h;
      z = (boundary - mean) / sd;
      lower = 0.5 * std::erfc(-z / std::numbers::sqrt2);  // Phi(z)
      upper = 0.5 * std::erfc(z / std::numbers::sqrt2);   // Q(z)
    }
    // Difference the tail that is small on this cell so that no mass is lost
    // to cancellation.
    double mass;
    if (z <= 0.0) {
      mass = lower - prev_lower;
    } else if (prev_z >= 0.0) {
      mass = prev_upper - upper;
    } else {
      mass = 1.0 - prev_lower - upper;
    }
    out[k] = std::max(mass, 0.0);
    prev_z = z;
    prev_lower = lower;
    prev_upper = upper;
  }
}

std::vector<double> UpdateImage(const UpdateMap& update, const Grid1D& grid) {
  std::vector<double> image(grid.points());
  for (std::int64_t k = 0; k < grid.points(); ++k) {
    image[k] = update(grid.point(k));
  }
  return image;
}

struct ProcessPair {
  std::int64_t index = 0;
  double psi = 0.0;
};

ProcessPair FindDifference(const GridProcessSpec& a, const GridProcessSpec& b) {
  a.Validate();
  b.Validate();
  if (!(a.grid == b.grid)) throw ShapeError("specs use different grids");
  if (a.steps.size() != b.steps.size()) {
    throw ShapeError("specs have different numbers of steps");
  }
  if (!std::ranges::equal(a.init.probs(), b.init.probs())) {
    throw ShapeError("specs have different initial distributions");
  }
  ProcessPair out;
  for (std::size_t t = 0; t < a.steps.size(); ++t) {
    if (a.steps[t].noise_std != b.steps[t].noise_std) {
      throw ShapeError("specs have different noise levels at step " +
                       std::to_string(t + 1));
    }
    double psi = 0.0;
    for (std::int64_t k = 0; k < a.grid.points(); ++k) {
      const double w = a.grid.point(k);
      psi = std::max(psi, std::abs(a.steps[t].update(w) - b.steps[t].update(w)));
    }
    if (psi > 0.0) {
      if (out.index != 0) {
        throw ShapeError("specs differ at steps " + std::to_string(out.index) +
                         " and " + std::to_string(t + 1));
      }
      out.index = static_cast<std::int64_t>(t) + 1;
      out.psi = psi;
    }
  }
  if (out.index == 0) out.index = static_cast<std::int64_t>(a.steps.size());
  return out;
}

// Kernels and laws mu_1, ..., mu_{n+1} of one process.
struct Run {
  std::vector<DiscreteKernel> kernels;
  std::vector<DiscreteDistribution> laws;
};

Run RunProcess(const GridProcessSpec& spec) {
  Run run;
  run.laws.push_back(spec.init);
  for (const auto& s : spec.steps) {
    run.kernels.push_back(GridKernel(s.update, s.noise_std, spec.grid));
    run.laws.push_back(run.kernels.back().Apply(run.laws.back()));
  }
  return run;
}

// Laws of a neighbor that differs from `base` only at step `index`.
std::vector<DiscreteDistribution> RunNeighbor(const Run& base,
                                              const GridProcessSpec& prime,
                                              std::int64_t index) {
  std::vector<DiscreteDistribution> laws(base.laws.begin(),
                                         base.laws.begin() + index);
  const GridStep& step = prime.steps[index - 1];
  laws.push_back(
      GridKernel(step.update, step.noise_std, prime.grid).Apply(laws.back()));
  for (std::size_t t = index; t < base.kernels.size(); ++t) {
    laws.push_back(base.kernels[t].Apply(laws.back()));
  }
  return laws;
}

// Uniform mixture of laws[1], ..., laws[n].
DiscreteDistribution Mixture(const std::vector<DiscreteDistribution>& laws) {
  std::vector<double> sum(laws.front().size(), 0.0);
  for (std::size_t t = 1; t < laws.size(); ++t) {
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += laws[t][k];
  }
  const double inv = 1.0 / static_cast<double>(laws.size() - 1);
  for (double& s : sum) s *= inv;
  return DiscreteDistribution(std::move(sum));
}

}  // namespace

Grid1D::Grid1D(double lo, double hi, std::int64_t points)
    : lo_(lo), hi_(hi), points_(points) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw DomainError("Grid1D: need finite lo < hi");
  }
  if (points < 3) throw DomainError("Grid1D: need at least 3 points");
}

double Grid1D::point(std::int64_t k) const {
  // Pin the end points so projection lands exactly on them.
  if (k == points_ - 1) return hi_;
  return lo_ + static_cast<double>(k) * h();
}

void GridProcessSpec::Validate() const {
  if (steps.empty()) throw ShapeError("GridProcessSpec: no steps");
  if (static_cast<std::int64_t>(init.size()) != grid.points()) {
    throw ShapeError("GridProcessSpec: init has " +
                     std::to_string(init.size()) + " atoms for a grid of " +
                     std::to_string(grid.points()));
  }
  for (const auto& s : steps) {
    if (!s.update) throw DomainError("GridProcessSpec: missing update map");
    if (!(s.noise_std > 0.0) || !std::isfinite(s.noise_std)) {
      throw DomainError("GridProcessSpec: noise_std must be positive");
    }
  }
}

DiscreteKernel GridKernel(const UpdateMap& update, double noise_std,
                          const Grid1D& grid) {
  if (!(noise_std > 0.0) || !std::isfinite(noise_std)) {
    throw DomainError("GridKernel: noise_std must be positive and finite");
  }
  const std::vector<double> image = UpdateImage(update, grid);
  for (double u : image) {
    if (!std::isfinite(u)) {
      throw DomainError("GridKernel: update produced a non-finite value");
    }
  }
  const std::size_t n = static_cast<std::size_t>(grid.points());
  std::vector<double> data(n * n);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    FillRow(image[i], noise_std, grid, data.data() + i * n);
  }
  return DiscreteKernel::FromRowMajor(n, n, std::move(data));
}

DiscreteDistribution Propagate(const GridProcessSpec& spec) {
  spec.Validate();
  DiscreteDistribution mu = spec.init;
  for (const auto& s : spec.steps) {
    mu = GridKernel(s.update, s.noise_std, spec.grid).Apply(mu);
  }
  return mu;
}

DiscreteDistribution PropagateRandomlyStopped(const GridProcessSpec& spec) {
  spec.Validate();
  return Mixture(RunProcess(spec).laws);
}

InducedSchedule InduceSchedule(const GridProcessSpec& spec,
                               const GridProcessSpec& spec_prime) {
  const ProcessPair pair = FindDifference(spec, spec_prime);
  std::vector<double> sigmas;
  std::vector<double> diameters;
  for (const auto& s : spec.steps) {
    const std::vector<double> image = UpdateImage(s.update, spec.grid);
    const auto [lo, hi] = std::ranges::minmax(image);
    sigmas.push_back(s.noise_std);
    diameters.push_back(hi - lo);
  }
  return {pair.index, IterationSchedule(std::move(sigmas), std::move(diameters),
                                        pair.psi)};
}

std::vector<CertificationReport> CertifyIndexBound(
    const GridProcessSpec& spec, const GridProcessSpec& spec_prime,
    std::span<const double> epsilons) {
  return CertifyIndexBounds(spec, {&spec_prime, 1}, epsilons).front();
}

std::vector<std::vector<CertificationReport>> CertifyIndexBounds(
    const GridProcessSpec& spec, std::span<const GridProcessSpec> primes,
    std::span<const double> epsilons) {
  std::vector<InducedSchedule> induced;
  for (const auto& prime : primes) induced.push_back(InduceSchedule(spec, prime));
  const Run base = RunProcess(spec);
  const double tolerance = kCertificationToleranceFactor * spec.grid.h();
  std::vector<std::vector<CertificationReport>> out;
  for (std::size_t k = 0; k < primes.size(); ++k) {
    const std::int64_t index = induced[k].index;
    const auto laws = RunNeighbor(base, primes[k], index);
    std::vector<CertificationReport> reports;
    for (double eps : epsilons) {
      CertificationReport r;
      r.index = index;
      r.epsilon = eps;
      r.exact = EGammaDiscrete(base.laws.back(), laws.back(),
                               GammaLevel::FromEpsilon(eps));
      r.bound = DeltaAtIndex(induced[k].schedule, index, eps).delta;
      r.tolerance = tolerance;
      r.holds = r.exact <= r.bound + r.tolerance;
      reports.push_back(r);
    }
    out.push_back(std::move(reports));
  }
  return out;
}

std::vector<CertificationReport> CertifyRandomlyStopped(
    const GridProcessSpec& spec, const GridProcessSpec& spec_prime,
    std::span<const double> epsilons, Aggregation mode) {
  return CertifyRandomlyStoppedBatch(spec, {&spec_prime, 1}, epsilons, mode)
      .front();
}

std::vector<std::vector<CertificationReport>> CertifyRandomlyStoppedBatch(
    const GridProcessSpec& spec, std::span<const GridProcessSpec> primes,
    std::span<const double> epsilons, Aggregation mode) {
  std::vector<InducedSchedule> induced;
  for (const auto& prime : primes) induced.push_back(InduceSchedule(spec, prime));
  const Run base = RunProcess(spec);
  const DiscreteDistribution mix = Mixture(base.laws);
  const double tolerance = kCertificationToleranceFactor * spec.grid.h();
  std::vector<std::vector<CertificationReport>> out;
  for (std::size_t k = 0; k < primes.size(); ++k) {
    const std::int64_t index = induced[k].index;
    const DiscreteDistribution mix_prime =
        Mixture(RunNeighbor(base, primes[k], index));
    std::vector<CertificationReport> reports;
    for (double eps : epsilons) {
      CertificationReport r;
      r.index = index;
      r.epsilon = eps;
      r.exact = EGammaDiscrete(mix, mix_prime, GammaLevel::FromEpsilon(eps));
      r.bound = DeltaRandomlyStopped(induced[k].schedule, eps, mode).value.delta;
      r.tolerance = tolerance;
      r.holds = r.exact <= r.bound + r.tolerance;
      reports.push_back(r);
    }
    out.push_back(std::move(reports));
  }
  return out;
}

}  // namespace egamma
