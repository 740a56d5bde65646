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

// Parameter sweeps and worked examples behind the command-line tool. Every
// number the tool prints comes from one of these functions; the tool itself
// only formats.

#ifndef EGAMMA_EXPERIMENTS_H_
#define EGAMMA_EXPERIMENTS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "egamma/accountant.h"
#include "egamma/baselines.h"
#include "egamma/contraction.h"
#include "egamma/ogd.h"
#include "egamma/oracles.h"
#include "egamma/report.h"

namespace egamma {

// Values start, start + step, ... up to stop (inclusive, with a 1e-9 relative
// allowance for accumulated rounding).
struct EpsGrid {
  double start = 0.0;
  double stop = 10.0;
  double step = 0.25;

  // Throws DomainError unless start >= 0, step > 0 and stop >= start.
  void Validate() const;
  std::vector<double> Values() const;
};

// Columns r, theta, log10_theta, complement.
Table ThetaTable(const GammaLevel& level, std::span<const double> radii);

// Chi-square bounds for two worked examples. The Gaussian one runs the input
// pair N(0, 1), N(2, 1) through the projected Gaussian kernel with dia = 1,
// sigma = 1, bounding the projected input curves by the Gaussian ones. The
// binary one runs Bern(0.1), Bern(0.4) through the channel a = 0.1, b = 0.4.
// "Baseline" multiplies the input divergence by eta_TV; "contraction"
// integrates eta_gamma against the input E_gamma curves.
double GaussianExampleBaseline();
double GaussianExampleContraction();
double BinaryExampleBaseline();
double BinaryExampleContraction();

struct Chi2ExampleRow {
  std::string name;
  double computed = 0.0;
  double expected = 0.0;
  double abs_diff = 0.0;
};
std::vector<Chi2ExampleRow> Chi2Examples();
Table Chi2ExamplesTable(std::span<const Chi2ExampleRow> rows);

// Randomly stopped PNSGD against the RDP baselines, L = beta = 1, n = 100.
struct ComparisonParams {
  std::int64_t n = 100;
  double lipschitz = 1.0;
  double smoothness = 1.0;
  double eta = 0.05;
  double sigma = 3.0;
};
// Panels 'a' (eta 0.2, sigma 1), 'b' (0.1, 3) and 'c' (0.05, 3).
ComparisonParams ComparisonPanel(char panel);

struct ComparisonRow {
  double epsilon = 0.0;
  DeltaValue ours;
  BaselineDelta hat;
  BaselineDelta check;
};
// Rows in grid order; evaluated in parallel.
std::vector<ComparisonRow> CompareWithBaselines(const ComparisonParams& params, const EpsGrid& grid);
Table ComparisonTable(std::span<const ComparisonRow> rows);

struct PnsgdRow {
  double epsilon = 0.0;
  DeltaValue closed_form;
  RandomlyStoppedDelta aggregated;  // per-index aggregation in `mode`
};
std::vector<PnsgdRow> PnsgdSweep(const PnsgdConfig& config, bool smooth,
                                 Aggregation mode, const EpsGrid& grid);
Table PnsgdTable(std::span<const PnsgdRow> rows);

struct BinaryRow {
  double epsilon = 0.0;
  double gamma = 1.0;
  double eta_closed_form = 0.0;
  double eta_row_pairs = 0.0;
  double eta_tv = 0.0;
};
std::vector<BinaryRow> BinaryChannelSweep(const BinaryChannel& channel,
                                          const EpsGrid& grid);
Table BinaryChannelTable(std::span<const BinaryRow> rows);

enum class OgdMode { kConstantSigma, kConstantLambda };
OgdMode ParseOgdMode(std::string_view name);
std::string_view OgdModeName(OgdMode mode);

struct OgdRow {
  double epsilon = 0.0;
  Tradeoff tradeoff;
  double regret_bound = 0.0;  // the general stochastic regret bound
};
std::vector<OgdRow> OgdSweep(const OgdConfig& config, OgdMode mode,
                             const EpsGrid& grid);
// With a simulation, sim_mean and sim_stderr columns are appended.
Table OgdTable(std::span<const OgdRow> rows,
               const std::optional<RegretEstimate>& simulation);

// Randomly drawn three-step processes on [0, 1] with updates
// w -> (1 - eta_t) w + eta_t c_t, plus one neighbor per step that redraws c_t.
struct ProcessFamily {
  GridProcessSpec base;
  std::vector<GridProcessSpec> neighbors;  // neighbors[i] differs at step i + 1
};
std::vector<ProcessFamily> RandomThreeStepProcesses(int count,
                                                    std::uint64_t seed,
                                                    std::int64_t points);

struct ValidationCheck {
  std::string suite;
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
  double margin() const { return rhs - lhs; }
};

struct ValidationReport {
  std::string suite;
  std::uint64_t seed = 0;
  double bound_scale = 1.0;
  std::vector<ValidationCheck> checks;

  bool all_pass() const;
  nlohmann::ordered_json ToJson() const;
};

// suite is "discrete", "grid" or "all". Every certified bound is multiplied
// by bound_scale before comparison; values below 1 are a negative control.
ValidationReport Validate(std::string_view suite, std::uint64_t seed,
                          double bound_scale = 1.0);

}  // namespace egamma

#endif  // EGAMMA_EXPERIMENTS_H_
