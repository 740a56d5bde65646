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

#include "egamma/experiments.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numbers>
#include <random>
#include <string>

#include "egamma/divergences.h"
#include "egamma/errors.h"

namespace egamma {
namespace {

// out[k] = fn(in[k]) in parallel; the first exception (by index) is rethrown.
template <typename Out, typename Fn>
std::vector<Out> ParallelMap(const std::vector<double>& in, Fn fn) {
  std::vector<Out> out(in.size());
  std::vector<std::exception_ptr> errors(in.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < in.size(); ++k) {
    try {
      out[k] = fn(in[k]);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<double> Dirichlet(std::size_t size, std::mt19937_64& rng) {
  std::exponential_distribution<double> exponential(1.0);
  std::vector<double> p(size);
  double sum = 0.0;
  for (double& x : p) sum += (x = exponential(rng));
  for (double& x : p) x /= sum;
  double total = 0.0;
  for (double x : p) total += x;
  *std::max_element(p.begin(), p.end()) += 1.0 - total;
  return p;
}

DiscreteKernel RandomKernel(std::size_t rows, std::size_t cols,
                            std::mt19937_64& rng) {
  std::vector<double> data;
  for (std::size_t i = 0; i < rows; ++i) {
    const auto row = Dirichlet(cols, rng);
    data.insert(data.end(), row.begin(), row.end());
  }
  return DiscreteKernel::FromRowMajor(rows, cols, std::move(data));
}

std::string Fmt(const char* format, double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, x);
  return buf;
}

void AddCheck(ValidationReport& report, std::string suite, std::string name,
              double lhs, double rhs) {
  report.checks.push_back({std::move(suite), std::move(name), lhs, rhs,
                           lhs <= rhs});
}

void DiscreteSuite(ValidationReport& report, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  const double levels[] = {1.0, 1.5, std::numbers::e};
  for (int k = 0; k < 8; ++k) {
    const std::size_t rows = 3 + k % 6;
    const std::size_t cols = 2 + (k * 5) % 5;
    const DiscreteKernel kernel = RandomKernel(rows, cols, rng);
    const double tv = EtaGammaDiscrete(kernel, GammaLevel(1.0));
    for (double g : levels) {
      const GammaLevel level(g);
      const std::string tag =
          "kernel" + std::to_string(k) + Fmt("/gamma=%.4g", g);
      const SdpiReport sdpi = VerifySdpiDiscrete(kernel, level, 500, rng());
      AddCheck(report, "discrete", "sdpi/" + tag, sdpi.max_ratio,
               scale * sdpi.eta + kSdpiRatioSlack);
      AddCheck(report, "discrete", "achievability/" + tag,
               sdpi.achievability_gap, kAchievabilityTolerance);
      AddCheck(report, "discrete", "tv-dominance/" + tag, sdpi.eta, scale * tv);

      // Two-kernel chain: E(mu A B || nu A B) <= E(mu A || nu A) eta(B).
      const DiscreteKernel next = RandomKernel(cols, 4, rng);
      const DiscreteDistribution mu(Dirichlet(rows, rng));
      const DiscreteDistribution nu(Dirichlet(rows, rng));
      const auto mid_mu = kernel.Apply(mu);
      const auto mid_nu = kernel.Apply(nu);
      AddCheck(report, "discrete", "chain/" + tag,
               EGammaDiscrete(next.Apply(mid_mu), next.Apply(mid_nu), level),
               scale * EGammaDiscrete(mid_mu, mid_nu, level) *
                       EtaGammaDiscrete(next, level) +
                   kSdpiRatioSlack);
    }
  }
  std::uniform_real_distribution<double> crossover(0.0, 0.5);
  for (int k = 0; k < 8; ++k) {
    const BinaryChannel channel(crossover(rng), crossover(rng));
    for (double g : levels) {
      const GammaLevel level(g);
      AddCheck(report, "discrete",
               "binary-closed-form/channel" + std::to_string(k) +
                   Fmt("/gamma=%.4g", g),
               std::abs(EtaGammaBinary(channel, level) -
                        EtaGammaDiscrete(channel.ToKernel(), level)),
               1e-14);
    }
  }
}

void GridSuite(ValidationReport& report, std::uint64_t seed, double scale) {
  const double epsilons[] = {0.5, 1.0, 2.0};
  const auto families = RandomThreeStepProcesses(3, seed, 2001);
  for (std::size_t f = 0; f < families.size(); ++f) {
    const auto& fam = families[f];
    const std::string tag = "process" + std::to_string(f);
    const auto per_index =
        CertifyIndexBounds(fam.base, fam.neighbors, epsilons);
    for (const auto& reports : per_index) {
      for (const auto& r : reports) {
        AddCheck(report, "grid",
                 "index-bound/" + tag + "/i=" + std::to_string(r.index) +
                     Fmt("/eps=%.4g", r.epsilon),
                 r.exact, scale * r.bound + r.tolerance);
      }
    }
    for (Aggregation mode : {Aggregation::kSoundMax, Aggregation::kGeometric}) {
      const auto stopped =
          CertifyRandomlyStoppedBatch(fam.base, fam.neighbors, epsilons, mode);
      for (const auto& reports : stopped) {
        for (const auto& r : reports) {
          AddCheck(report, "grid",
                   "randomly-stopped-" + std::string(AggregationName(mode)) +
                       "/" + tag + "/i=" + std::to_string(r.index) +
                       Fmt("/eps=%.4g", r.epsilon),
                   r.exact, scale * r.bound + r.tolerance);
        }
      }
    }
  }
  const Grid1D grid(0.0, 1.0, 501);
  for (double sigma : {0.5, 1.0}) {
    const DiscreteKernel kernel =
        GridKernel([](double w) { return w; }, sigma, grid);
    for (double g : {1.0, std::numbers::e}) {
      const GammaLevel level(g);
      AddCheck(report, "grid",
               Fmt("projected-gaussian/sigma=%.4g", sigma) +
                   Fmt("/gamma=%.4g", g),
               EtaGammaDiscrete(kernel, level),
               scale * ThetaGamma(level, 1.0 / sigma) +
                   kCertificationToleranceFactor * grid.h());
    }
  }
}

}  // namespace

void EpsGrid::Validate() const {
  if (!(start >= 0.0) || !std::isfinite(start)) {
    throw DomainError("epsilon grid: start must be >= 0");
  }
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw DomainError("epsilon grid: step must be > 0");
  }
  if (!(stop >= start) || !std::isfinite(stop)) {
    throw DomainError("epsilon grid: stop must be >= start");
  }
}

std::vector<double> EpsGrid::Values() const {
  Validate();
  const auto count = static_cast<std::int64_t>(
      std::floor((stop - start) / step * (1.0 + 1e-9) + 1e-9));
  std::vector<double> out;
  for (std::int64_t k = 0; k <= count; ++k) {
    out.push_back(start + static_cast<double>(k) * step);
  }
  return out;
}

Table ThetaTable(const GammaLevel& level, std::span<const double> radii) {
  Table table({"r", "theta", "log10_theta", "complement"});
  for (double r : radii) {
    table.AddRow({r, ThetaGamma(level, r),
                  LogThetaGamma(level, r) / std::numbers::ln10,
                  ThetaGammaComplement(level, r)});
  }
  return table;
}

double GaussianExampleBaseline() {
  // eta_TV of the kernel times the chi-square divergence of the input pair.
  const GammaCurve curve = [](double g) { return ThetaGamma(GammaLevel(g), 2.0); };
  const GammaCurve two = [](double) { return 2.0; };
  const double chi2 = FDivergenceFromEGammaCurves(two, curve, curve, {}).value;
  return ThetaGamma(GammaLevel(1.0), 1.0) * chi2;
}

double GaussianExampleContraction() {
  const GammaCurve eta = [](double g) { return ThetaGamma(GammaLevel(g), 1.0); };
  const GammaCurve curve = [](double g) { return ThetaGamma(GammaLevel(g), 2.0); };
  return Chi2UpperBound(eta, curve, curve, {}).value;
}

namespace {

constexpr double kBinaryA = 0.1;
constexpr double kBinaryB = 0.4;

EGammaIntegralOptions BinaryExampleOptions() {
  const double a = kBinaryA;
  const double b = kBinaryB;
  // Beyond max{(1 - b) / a, (1 - a) / b} every eta_gamma vanishes; the input
  // curves have their kinks at 1.5 and 4.
  EGammaIntegralOptions options;
  options.gamma_max = std::max((1.0 - b) / a, (1.0 - a) / b);
  options.breakpoints = {1.5, (1.0 - a) / b, 4.0};
  return options;
}

GammaCurve BernoulliCurve(double p, double q) {
  return [p, q](double g) {
    return EGammaDiscrete(DiscreteDistribution::Bernoulli(p),
                          DiscreteDistribution::Bernoulli(q), GammaLevel(g));
  };
}

}  // namespace

double BinaryExampleBaseline() {
  const BinaryChannel channel(kBinaryA, kBinaryB);
  const GammaCurve two = [](double) { return 2.0; };
  const double chi2 =
      FDivergenceFromEGammaCurves(two, BernoulliCurve(0.1, 0.4),
                                  BernoulliCurve(0.4, 0.1), BinaryExampleOptions())
          .value;
  return EtaGammaBinary(channel, GammaLevel(1.0)) * chi2;
}

double BinaryExampleContraction() {
  const BinaryChannel channel(kBinaryA, kBinaryB);
  const GammaCurve eta = [channel](double g) {
    return EtaGammaBinary(channel, GammaLevel(g));
  };
  return Chi2UpperBound(eta, BernoulliCurve(0.1, 0.4), BernoulliCurve(0.4, 0.1),
                        BinaryExampleOptions())
      .value;
}

std::vector<Chi2ExampleRow> Chi2Examples() {
  const std::pair<const char*, double> expected[] = {
      {"gaussian_baseline", 0.49},
      {"gaussian_contraction", 0.26},
      {"binary_baseline", 0.19},
      {"binary_contraction", 0.17},
  };
  const double computed[] = {GaussianExampleBaseline(), GaussianExampleContraction(),
                             BinaryExampleBaseline(), BinaryExampleContraction()};
  std::vector<Chi2ExampleRow> rows;
  for (int k = 0; k < 4; ++k) {
    rows.push_back({expected[k].first, computed[k], expected[k].second,
                    std::abs(computed[k] - expected[k].second)});
  }
  return rows;
}

Table Chi2ExamplesTable(std::span<const Chi2ExampleRow> rows) {
  Table table({"example", "computed", "expected", "abs_diff"});
  for (const auto& r : rows) {
    table.AddRow({r.name, r.computed, r.expected, r.abs_diff});
  }
  return table;
}

ComparisonParams ComparisonPanel(char panel) {
  ComparisonParams p;
  switch (panel) {
    case 'a':
      p.eta = 0.2;
      p.sigma = 1.0;
      break;
    case 'b':
      p.eta = 0.1;
      p.sigma = 3.0;
      break;
    case 'c':
      p.eta = 0.05;
      p.sigma = 3.0;
      break;
    default:
      throw DomainError(std::string("unknown panel '") + panel +
                        "'; expected a, b or c");
  }
  return p;
}

std::vector<ComparisonRow> CompareWithBaselines(const ComparisonParams& params, const EpsGrid& grid) {
  PnsgdConfig config;
  config.n = params.n;
  config.lipschitz = params.lipschitz;
  config.smoothness = params.smoothness;
  config.eta = params.eta;
  config.sigma = params.sigma;
  config.Validate(/*smooth=*/true);
  const FeldmanParams feldman(params.n, params.lipschitz, params.sigma);
  return ParallelMap<ComparisonRow>(grid.Values(), [&](double eps) {
    return ComparisonRow{eps, PnsgdDelta(config, eps, /*smooth=*/true),
                   DeltaHat(feldman, eps), DeltaCheck(feldman, eps)};
  });
}

Table ComparisonTable(std::span<const ComparisonRow> rows) {
  Table table({"epsilon", "delta_ours", "log10_delta_ours", "delta_hat",
               "log10_delta_hat", "alpha_hat", "delta_check",
               "log10_delta_check", "alpha_check"});
  for (const auto& r : rows) {
    table.AddRow({r.epsilon, r.ours.delta, r.ours.log10_delta, r.hat.delta,
                  r.hat.log10_delta, r.hat.alpha, r.check.delta,
                  r.check.log10_delta, r.check.alpha});
  }
  return table;
}

std::vector<PnsgdRow> PnsgdSweep(const PnsgdConfig& config, bool smooth,
                                 Aggregation mode, const EpsGrid& grid) {
  config.Validate(smooth);
  const IterationSchedule schedule = PnsgdSchedule(config, smooth);
  return ParallelMap<PnsgdRow>(grid.Values(), [&](double eps) {
    return PnsgdRow{eps, PnsgdDelta(config, eps, smooth),
                    DeltaRandomlyStopped(schedule, eps, mode)};
  });
}

Table PnsgdTable(std::span<const PnsgdRow> rows) {
  Table table({"epsilon", "delta_closed_form", "log10_delta_closed_form",
               "delta_aggregated", "log10_delta_aggregated", "index"});
  for (const auto& r : rows) {
    table.AddRow({r.epsilon, r.closed_form.delta, r.closed_form.log10_delta,
                  r.aggregated.value.delta, r.aggregated.value.log10_delta,
                  static_cast<double>(r.aggregated.index)});
  }
  return table;
}

std::vector<BinaryRow> BinaryChannelSweep(const BinaryChannel& channel,
                                          const EpsGrid& grid) {
  const DiscreteKernel kernel = channel.ToKernel();
  const double tv = EtaGammaBinary(channel, GammaLevel(1.0));
  std::vector<BinaryRow> rows;
  for (double eps : grid.Values()) {
    const GammaLevel level = GammaLevel::FromEpsilon(eps);
    rows.push_back({eps, level.gamma(), EtaGammaBinary(channel, level),
                    EtaGammaDiscrete(kernel, level), tv});
  }
  return rows;
}

Table BinaryChannelTable(std::span<const BinaryRow> rows) {
  Table table({"epsilon", "gamma", "eta_closed_form", "eta_row_pairs",
               "eta_tv"});
  for (const auto& r : rows) {
    table.AddRow({r.epsilon, r.gamma, r.eta_closed_form, r.eta_row_pairs,
                  r.eta_tv});
  }
  return table;
}

OgdMode ParseOgdMode(std::string_view name) {
  if (name == "sigma") return OgdMode::kConstantSigma;
  if (name == "lambda") return OgdMode::kConstantLambda;
  throw DomainError("unknown OGD mode '" + std::string(name) +
                    "'; expected sigma or lambda");
}

std::string_view OgdModeName(OgdMode mode) {
  return mode == OgdMode::kConstantSigma ? "sigma" : "lambda";
}

std::vector<OgdRow> OgdSweep(const OgdConfig& config, OgdMode mode,
                             const EpsGrid& grid) {
  config.Validate();
  const double regret = StochasticRegretBound(config);
  return ParallelMap<OgdRow>(grid.Values(), [&](double eps) {
    const Tradeoff t = mode == OgdMode::kConstantSigma
                           ? TradeoffConstantSigma(config, eps)
                           : TradeoffConstantLambda(config, eps);
    return OgdRow{eps, t, regret};
  });
}

Table OgdTable(std::span<const OgdRow> rows,
               const std::optional<RegretEstimate>& simulation) {
  std::vector<std::string> columns = {"epsilon", "delta", "log10_delta",
                                      "utility_bound", "regret_bound"};
  if (simulation) {
    columns.push_back("sim_mean");
    columns.push_back("sim_stderr");
  }
  Table table(std::move(columns));
  for (const auto& r : rows) {
    std::vector<Cell> row = {r.epsilon, r.tradeoff.delta,
                             r.tradeoff.log10_delta, r.tradeoff.utility_bound,
                             r.regret_bound};
    if (simulation) {
      row.push_back(simulation->mean);
      row.push_back(simulation->std_error);
    }
    table.AddRow(std::move(row));
  }
  return table;
}

std::vector<ProcessFamily> RandomThreeStepProcesses(int count,
                                                    std::uint64_t seed,
                                                    std::int64_t points) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Grid1D grid(0.0, 1.0, points);
  auto step = [](double eta, double c, double sigma) {
    return GridStep{[eta, c](double w) { return (1.0 - eta) * w + eta * c; },
                    sigma};
  };
  std::vector<ProcessFamily> out;
  for (int k = 0; k < count; ++k) {
    double etas[3];
    double centers[3];
    double sigmas[3];
    for (int t = 0; t < 3; ++t) {
      etas[t] = 0.2 + 0.7 * unit(rng);
      centers[t] = unit(rng);
      sigmas[t] = 0.05 + 0.25 * unit(rng);
    }
    const auto start = static_cast<std::size_t>(
        std::min<double>(static_cast<double>(points - 1),
                         std::floor(unit(rng) * static_cast<double>(points))));
    GridProcessSpec base{grid, {}, DiscreteDistribution::PointMass(points, start)};
    for (int t = 0; t < 3; ++t) {
      base.steps.push_back(step(etas[t], centers[t], sigmas[t]));
    }
    ProcessFamily fam{base, {}};
    for (int i = 0; i < 3; ++i) {
      GridProcessSpec prime = base;
      prime.steps[i] = step(etas[i], unit(rng), sigmas[i]);
      fam.neighbors.push_back(std::move(prime));
    }
    out.push_back(std::move(fam));
  }
  return out;
}

bool ValidationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ValidationCheck& c) { return c.pass; });
}

nlohmann::ordered_json ValidationReport::ToJson() const {
  nlohmann::ordered_json out;
  out["suite"] = suite;
  out["seed"] = seed;
  out["bound_scale"] = bound_scale;
  std::size_t failures = 0;
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    if (!c.pass) ++failures;
    list.push_back({{"suite", c.suite},
                    {"name", c.name},
                    {"lhs", c.lhs},
                    {"rhs", c.rhs},
                    {"margin", c.margin()},
                    {"pass", c.pass}});
  }
  out["total"] = checks.size();
  out["failures"] = failures;
  out["pass"] = failures == 0;
  out["checks"] = std::move(list);
  return out;
}

ValidationReport Validate(std::string_view suite, std::uint64_t seed,
                          double bound_scale) {
  if (suite != "discrete" && suite != "grid" && suite != "all") {
    throw DomainError("unknown validation suite '" + std::string(suite) +
                      "'; expected discrete, grid or all");
  }
  if (!(bound_scale > 0.0)) {
    throw DomainError("bound scale must be positive");
  }
  ValidationReport report;
  report.suite = std::string(suite);
  report.seed = seed;
  report.bound_scale = bound_scale;
  if (suite != "grid") DiscreteSuite(report, seed, bound_scale);
  if (suite != "discrete") GridSuite(report, seed + 1, bound_scale);
  return report;
}

}  // namespace egamma
