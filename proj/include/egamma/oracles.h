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

// First-principles validators built on a 1-D discretization of
// W = [lo, hi]. The projected Gaussian step w -> Proj_W(u(w) + sigma Z) is
// represented exactly at the grid level: interior cells receive Gaussian CDF
// differences and the mass beyond each end of W collapses onto the end point,
// which is the pushforward of clipping rather than a truncation.

#ifndef EGAMMA_ORACLES_H_
#define EGAMMA_ORACLES_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "egamma/accountant.h"
#include "egamma/contraction.h"
#include "egamma/divergences.h"

namespace egamma {

class Grid1D {
 public:
  // Throws DomainError unless lo < hi (both finite) and points >= 3.
  Grid1D(double lo, double hi, std::int64_t points);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  std::int64_t points() const { return points_; }
  double h() const { return (hi_ - lo_) / static_cast<double>(points_ - 1); }
  double point(std::int64_t k) const;

  bool operator==(const Grid1D& other) const = default;

 private:
  double lo_;
  double hi_;
  std::int64_t points_;
};

using UpdateMap = std::function<double(double)>;

struct GridStep {
  UpdateMap update;
  double noise_std = 1.0;
};

struct GridProcessSpec {
  Grid1D grid;
  std::vector<GridStep> steps;
  DiscreteDistribution init;

  // Throws ShapeError / DomainError on an invalid spec.
  void Validate() const;
};

// Row i is the law of Proj_W(update(w_i) + noise_std Z) on the grid. Rows are
// built in parallel.
DiscreteKernel GridKernel(const UpdateMap& update, double noise_std,
                          const Grid1D& grid);

// mu_{n+1} = mu_1 K_1 ... K_n.
DiscreteDistribution Propagate(const GridProcessSpec& spec);

// (1/n) sum_{t=2}^{n+1} mu_t, the law of the randomly stopped output.
DiscreteDistribution PropagateRandomlyStopped(const GridProcessSpec& spec);

struct CertificationReport {
  std::int64_t index = 0;  // 1-based differing step; n when specs agree
  double epsilon = 0.0;
  double exact = 0.0;
  double bound = 0.0;
  double tolerance = 0.0;
  bool holds = false;

  // bound + tolerance - exact.
  double margin() const { return bound + tolerance - exact; }
};

// Multiple of the grid spacing allowed between exact and bound.
inline constexpr double kCertificationToleranceFactor = 10.0;

// The schedule a grid process induces: sigma_t = noise_std_t, D_t = spread of
// update_t over the grid and psi = max over the grid of |u_i - u'_i|, where i
// is the single step at which the two specs differ.
struct InducedSchedule {
  std::int64_t index = 0;
  IterationSchedule schedule;
};
InducedSchedule InduceSchedule(const GridProcessSpec& spec,
                               const GridProcessSpec& spec_prime);

// Compares E_gamma(mu_{n+1} || mu'_{n+1}) against the per-index bound at the
// single differing step, for each epsilon. Throws ShapeError unless the specs
// share grid, n, init and noise levels and differ in at most one update.
std::vector<CertificationReport> CertifyIndexBound(
    const GridProcessSpec& spec, const GridProcessSpec& spec_prime,
    std::span<const double> epsilons);

// Batch form: one base process against several neighbors. The base kernels
// and laws are computed once; result[k] belongs to primes[k].
std::vector<std::vector<CertificationReport>> CertifyIndexBounds(
    const GridProcessSpec& spec, std::span<const GridProcessSpec> primes,
    std::span<const double> epsilons);

// Same for the randomly stopped output against DeltaRandomlyStopped(mode).
std::vector<CertificationReport> CertifyRandomlyStopped(
    const GridProcessSpec& spec, const GridProcessSpec& spec_prime,
    std::span<const double> epsilons, Aggregation mode);

std::vector<std::vector<CertificationReport>> CertifyRandomlyStoppedBatch(
    const GridProcessSpec& spec, std::span<const GridProcessSpec> primes,
    std::span<const double> epsilons, Aggregation mode);

}  // namespace egamma

#endif  // EGAMMA_ORACLES_H_
