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

// Straightforward serial implementations of the parallel kernels. They are
// slow and kept as references for parity tests and benchmarks.

#ifndef EGAMMA_REFERENCE_H_
#define EGAMMA_REFERENCE_H_

#include <cstdint>

#include "egamma/contraction.h"
#include "egamma/divergences.h"
#include "egamma/ogd.h"
#include "egamma/oracles.h"

namespace egamma::reference {

// Every ordered row pair, no pruning. Ties resolve to the first pair in
// row-major (from, to) order.
RowPairMax EtaGammaDiscreteArgmax(const DiscreteKernel& kernel,
                                  const GammaLevel& level);

DiscreteKernel GridKernel(const UpdateMap& update, double noise_std,
                          const Grid1D& grid);

DiscreteDistribution Apply(const DiscreteKernel& kernel,
                           const DiscreteDistribution& mu);

DiscreteDistribution Propagate(const GridProcessSpec& spec);

// Runs the shards one after another with the same streams as the parallel
// version, so results match it exactly.
RegretEstimate SimulateOgdRegret(const QuadraticFamily& family,
                                 const OgdConfig& config, std::int64_t trials,
                                 std::uint64_t seed, int shards = 8);

}  // namespace egamma::reference

#endif  // EGAMMA_REFERENCE_H_
