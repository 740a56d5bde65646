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

#include "cli.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "egamma/errors.h"
#include "egamma/experiments.h"

namespace egamma::cli {
namespace {

using Json = nlohmann::ordered_json;

struct Output {
  std::string format = "csv";
  std::string path;
};

void AddOutput(CLI::App* sub, Output& o, const char* default_format = "csv") {
  o.format = default_format;
  sub->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("--out", o.path, "output file (default: stdout)");
  sub->add_option("--config", "flat key = value file of option values; "
                              "command-line options take precedence");
}

void AddEpsGrid(CLI::App* sub, EpsGrid& g, double start, double stop,
                double step) {
  g = {start, stop, step};
  sub->add_option("--eps-start", g.start, "first epsilon")->capture_default_str();
  sub->add_option("--eps-stop", g.stop, "last epsilon")->capture_default_str();
  sub->add_option("--eps-step", g.step, "epsilon spacing")->capture_default_str();
}

Json GridJson(const EpsGrid& g) {
  return {{"start", g.start}, {"stop", g.stop}, {"step", g.step}};
}

Json Meta(const std::string& command) {
  Json meta;
  meta["command"] = command;
  meta["version"] = EGAMMA_VERSION;
  return meta;
}

void WriteText(const Output& o, const std::string& text, std::ostream& out) {
  if (o.path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.path, std::ios::binary);
  if (!file) throw DomainError("cannot open output file " + o.path);
  file << text;
  if (!file) throw DomainError("failed writing output file " + o.path);
}

void Emit(const Output& o, const Table& table, const Json& meta,
          std::ostream& out) {
  if (o.format == "json") {
    WriteText(o, ToJson(table, meta).dump(2) + "\n", out);
  } else {
    WriteText(o, ToCsv(table), out);
  }
}

// Reads `key = value` lines for the options of `sub` that were not given on
// the command line.
void ApplyConfig(CLI::App* sub) {
  const CLI::Option* config = sub->get_option_no_throw("--config");
  if (config == nullptr || config->count() == 0) return;
  const std::string path = config->as<std::string>();
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read config file " + path);
  for (const auto& item : CLI::ConfigTOML().from_config(in)) {
    if (!item.parents.empty()) {
      throw DomainError("config file " + path +
                        " must be flat; found section " + item.parents.front());
    }
    if (item.name == "config") {
      throw DomainError("config files cannot include other config files");
    }
    CLI::Option* opt = sub->get_option_no_throw("--" + item.name);
    if (opt == nullptr) {
      throw DomainError("config file " + path + ": unknown key '" + item.name +
                        "' for " + sub->get_name());
    }
    if (opt->count() > 0) continue;
    opt->add_result(item.inputs);
    opt->run_callback();
  }
}

std::vector<double> Range(double start, double stop, double step) {
  return EpsGrid{start, stop, step}.Values();
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"E_gamma contraction accounting for noisy iterative algorithms",
               "egamma"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(EGAMMA_VERSION));

  // Each subcommand fills `action`; it runs after a successful parse.
  std::function<int()> action;

  // theta
  auto* theta = app.add_subcommand("theta", "theta_gamma(r) over a grid of r");
  Output theta_out;
  double theta_gamma = 1.0;
  std::optional<double> theta_eps;
  double r_start = 0.0, r_stop = 5.0, r_step = 0.5;
  auto* gamma_opt = theta->add_option("--gamma", theta_gamma, "gamma >= 1")
                        ->capture_default_str();
  theta->add_option("--epsilon", theta_eps, "use gamma = e^epsilon")
      ->excludes(gamma_opt);
  theta->add_option("--r-start", r_start)->capture_default_str();
  theta->add_option("--r-stop", r_stop)->capture_default_str();
  theta->add_option("--r-step", r_step)->capture_default_str();
  AddOutput(theta, theta_out);
  theta->callback([&] {
    action = [&] {
      const GammaLevel level = theta_eps ? GammaLevel::FromEpsilon(*theta_eps)
                                         : GammaLevel(theta_gamma);
      const auto radii = Range(r_start, r_stop, r_step);
      Json meta = Meta("theta");
      meta["gamma"] = level.gamma();
      meta["r_grid"] = {{"start", r_start}, {"stop", r_stop}, {"step", r_step}};
      Emit(theta_out, ThetaTable(level, radii), meta, out);
      return kExitOk;
    };
  });

  // pnsgd
  auto* pnsgd = app.add_subcommand(
      "pnsgd", "randomly stopped PNSGD delta over an epsilon grid");
  Output pnsgd_out;
  PnsgdConfig pcfg;
  pcfg.n = 100;
  pcfg.eta = 0.05;
  pcfg.sigma = 3.0;
  bool smooth = false;
  std::string mode_name = "sound-max";
  EpsGrid pnsgd_grid;
  pnsgd->add_option("--n", pcfg.n, "horizon n")->capture_default_str();
  pnsgd->add_option("--lipschitz", pcfg.lipschitz, "Lipschitz constant L")
      ->capture_default_str();
  pnsgd->add_option("--smoothness", pcfg.smoothness, "smoothness beta");
  pnsgd->add_option("--eta", pcfg.eta, "learning rate")->capture_default_str();
  pnsgd->add_option("--sigma", pcfg.sigma, "noise multiplier")
      ->capture_default_str();
  pnsgd->add_option("--domain-diameter", pcfg.domain_diameter)
      ->capture_default_str();
  pnsgd->add_flag("--smooth", smooth,
                  "use the smooth refinement (needs eta <= 2 / smoothness)");
  pnsgd->add_option("--mode", mode_name, "paper-min, sound-max or geometric")
      ->capture_default_str();
  AddEpsGrid(pnsgd, pnsgd_grid, 0.5, 10.0, 0.5);
  AddOutput(pnsgd, pnsgd_out);
  pnsgd->callback([&] {
    action = [&] {
      const Aggregation mode = ParseAggregation(mode_name);
      const auto rows = PnsgdSweep(pcfg, smooth, mode, pnsgd_grid);
      Json meta = Meta("pnsgd");
      meta["n"] = pcfg.n;
      meta["lipschitz"] = pcfg.lipschitz;
      meta["smoothness"] =
          pcfg.smoothness ? Json(*pcfg.smoothness) : Json(nullptr);
      meta["eta"] = pcfg.eta;
      meta["sigma"] = pcfg.sigma;
      meta["domain_diameter"] = pcfg.domain_diameter;
      meta["smooth"] = smooth;
      meta["mode"] = std::string(AggregationName(mode));
      if (mode == Aggregation::kPaperMin) {
        meta["warning"] =
            "paper-min takes the smallest per-index bound and does not bound "
            "every neighboring index";
      }
      meta["eps_grid"] = GridJson(pnsgd_grid);
      Emit(pnsgd_out, PnsgdTable(rows), meta, out);
      return kExitOk;
    };
  });

  // compare-fig2
  auto* cmp = app.add_subcommand(
      "compare-fig2", "PNSGD delta against the two RDP-based baselines");
  Output cmp_out;
  std::string panel = "c";
  std::optional<double> cmp_eta, cmp_sigma;
  ComparisonParams cmp_params;
  EpsGrid cmp_grid;
  cmp->add_option("--panel", panel, "a (0.2, 1), b (0.1, 3) or c (0.05, 3)")
      ->check(CLI::IsMember({"a", "b", "c"}))
      ->capture_default_str();
  auto* cmp_eta_opt = cmp->add_option("--eta", cmp_eta, "learning rate");
  auto* cmp_sigma_opt =
      cmp->add_option("--sigma", cmp_sigma, "noise multiplier");
  cmp_eta_opt->needs(cmp_sigma_opt);
  cmp_sigma_opt->needs(cmp_eta_opt);
  cmp->add_option("--n", cmp_params.n)->capture_default_str();
  cmp->add_option("--lipschitz", cmp_params.lipschitz)->capture_default_str();
  cmp->add_option("--smoothness", cmp_params.smoothness)
      ->capture_default_str();
  AddEpsGrid(cmp, cmp_grid, 2.0, 10.0, 0.25);
  AddOutput(cmp, cmp_out);
  cmp->callback([&] {
    action = [&] {
      ComparisonParams p = ComparisonPanel(panel[0]);
      p.n = cmp_params.n;
      p.lipschitz = cmp_params.lipschitz;
      p.smoothness = cmp_params.smoothness;
      if (cmp_eta.has_value() != cmp_sigma.has_value()) {
        throw DomainError("--eta and --sigma must be given together");
      }
      if (cmp_eta) {
        p.eta = *cmp_eta;
        p.sigma = *cmp_sigma;
      }
      const auto rows = CompareWithBaselines(p, cmp_grid);
      Json meta = Meta("compare-fig2");
      meta["panel"] = cmp_eta ? "custom" : panel;
      meta["n"] = p.n;
      meta["lipschitz"] = p.lipschitz;
      meta["smoothness"] = p.smoothness;
      meta["eta"] = p.eta;
      meta["sigma"] = p.sigma;
      meta["eps_grid"] = GridJson(cmp_grid);
      Emit(cmp_out, ComparisonTable(rows), meta, out);
      return kExitOk;
    };
  });

  // chi2-examples
  auto* chi2 = app.add_subcommand(
      "chi2-examples", "chi-square bounds for the two worked examples");
  Output chi2_out;
  AddOutput(chi2, chi2_out);
  chi2->callback([&] {
    action = [&] {
      const auto rows = Chi2Examples();
      Emit(chi2_out, Chi2ExamplesTable(rows), Meta("chi2-examples"), out);
      return kExitOk;
    };
  });

  // binary-channel
  auto* binary = app.add_subcommand(
      "binary-channel", "eta_gamma of a binary channel over an epsilon grid");
  Output binary_out;
  double cross_a = 0.1, cross_b = 0.4;
  EpsGrid binary_grid;
  binary->add_option("--a", cross_a, "crossover 0 -> 1")->capture_default_str();
  binary->add_option("--b", cross_b, "crossover 1 -> 0")->capture_default_str();
  AddEpsGrid(binary, binary_grid, 0.0, 2.0, 0.25);
  AddOutput(binary, binary_out);
  binary->callback([&] {
    action = [&] {
      const auto rows =
          BinaryChannelSweep(BinaryChannel(cross_a, cross_b), binary_grid);
      Json meta = Meta("binary-channel");
      meta["a"] = cross_a;
      meta["b"] = cross_b;
      meta["eps_grid"] = GridJson(binary_grid);
      Emit(binary_out, BinaryChannelTable(rows), meta, out);
      return kExitOk;
    };
  });

  // ogd
  auto* ogd = app.add_subcommand(
      "ogd", "privacy and utility of randomly stopped noisy OGD");
  Output ogd_out;
  std::string tradeoff = "sigma";
  std::int64_t ogd_n = 100, dimension = 1;
  double grad_bound = 1.0, ogd_dia = 1.0, ogd_sigma = 1.0, lambda = 1.0;
  std::optional<double> psi, b_opt;
  double step_image = 0.0;
  std::optional<std::int64_t> trials;
  std::uint64_t ogd_seed = 0;
  int shards = 8;
  EpsGrid ogd_grid;
  ogd->add_option("--tradeoff", tradeoff,
                  "sigma (constant noise) or lambda (constant eta_t sigma_t)")
      ->check(CLI::IsMember({"sigma", "lambda"}))
      ->capture_default_str();
  ogd->add_option("--n", ogd_n)->capture_default_str();
  ogd->add_option("--grad-bound", grad_bound, "M")->capture_default_str();
  ogd->add_option("--domain-diameter", ogd_dia, "dia(W)")->capture_default_str();
  ogd->add_option("--dimension", dimension, "d")->capture_default_str();
  ogd->add_option("--sigma", ogd_sigma, "noise scale (sigma tradeoff)")
      ->capture_default_str();
  ogd->add_option("--lambda", lambda, "eta_t sigma_t (lambda tradeoff)")
      ->capture_default_str();
  ogd->add_option("--psi", psi, "update sensitivity (default 2 eta_1 M)");
  ogd->add_option("--b", b_opt, "B (default dia(W))");
  ogd->add_option("--step-image-diameter", step_image,
                  "D in the lambda utility bound (default B)");
  ogd->add_option("--simulate", trials, "Monte Carlo trials on 1-D quadratics");
  ogd->add_option("--seed", ogd_seed)->capture_default_str();
  ogd->add_option("--shards", shards)->capture_default_str();
  AddEpsGrid(ogd, ogd_grid, 0.5, 5.0, 0.5);
  AddOutput(ogd, ogd_out);
  ogd->callback([&] {
    action = [&] {
      const OgdMode mode = ParseOgdMode(tradeoff);
      const double b = b_opt.value_or(ogd_dia);
      OgdConfig cfg =
          mode == OgdMode::kConstantSigma
              ? OgdConfig::ConstantSigma(ogd_n, grad_bound, ogd_dia, dimension,
                                         ogd_sigma, 0.0, b)
              : OgdConfig::ConstantLambda(ogd_n, grad_bound, ogd_dia,
                                          dimension, lambda, 0.0, b);
      cfg.psi = psi.value_or(OgdSensitivityBound(cfg, 1));
      cfg.step_image_diameter = step_image;
      cfg.Validate();
      const auto rows = OgdSweep(cfg, mode, ogd_grid);
      std::optional<RegretEstimate> sim;
      if (trials) {
        sim = SimulateOgdRegret({0.0, ogd_dia}, cfg, *trials, ogd_seed, shards);
      }
      Json meta = Meta("ogd");
      meta["tradeoff"] = std::string(OgdModeName(mode));
      meta["n"] = ogd_n;
      meta["grad_bound"] = grad_bound;
      meta["domain_diameter"] = ogd_dia;
      meta["dimension"] = dimension;
      if (mode == OgdMode::kConstantSigma) {
        meta["sigma"] = ogd_sigma;
      } else {
        meta["lambda"] = lambda;
      }
      meta["psi"] = cfg.psi;
      meta["b"] = cfg.b;
      meta["step_image_diameter"] = cfg.image_diameter();
      if (sim) {
        meta["simulation"] = {{"trials", *trials},
                              {"seed", ogd_seed},
                              {"shards", shards},
                              {"family", "f_t(w) = (w - c_t)^2 / 2, c_t ~ "
                                         "U[0, dia(W)], W_1 = 0"}};
      }
      meta["eps_grid"] = GridJson(ogd_grid);
      Emit(ogd_out, OgdTable(rows, sim), meta, out);
      return kExitOk;
    };
  });

  // validate
  auto* validate = app.add_subcommand(
      "validate", "certify the bounds against exact finite computations");
  Output validate_out;
  std::string suite = "all";
  std::uint64_t validate_seed = 0;
  double bound_scale = 1.0;
  validate->add_option("--suite", suite, "discrete, grid or all")
      ->check(CLI::IsMember({"discrete", "grid", "all"}))
      ->capture_default_str();
  validate->add_option("--seed", validate_seed)->capture_default_str();
  validate->add_option("--bound-scale", bound_scale,
                       "multiply every certified bound (negative control)")
      ->capture_default_str();
  AddOutput(validate, validate_out, "json");
  validate->callback([&] {
    action = [&] {
      const ValidationReport report = Validate(suite, validate_seed, bound_scale);
      if (validate_out.format == "json") {
        Json doc;
        doc["meta"] = Meta("validate");
        doc["report"] = report.ToJson();
        WriteText(validate_out, doc.dump(2) + "\n", out);
      } else {
        Table table({"suite", "name", "lhs", "rhs", "margin", "pass"});
        for (const auto& c : report.checks) {
          table.AddRow({c.suite, c.name, c.lhs, c.rhs, c.margin(),
                        c.pass ? 1.0 : 0.0});
        }
        WriteText(validate_out, ToCsv(table), out);
      }
      if (!report.all_pass()) {
        err << "validate: " << std::count_if(report.checks.begin(),
                                             report.checks.end(),
                                             [](const auto& c) {
                                               return !c.pass;
                                             })
            << " of " << report.checks.size() << " checks failed\n";
        return kExitValidation;
      }
      return kExitOk;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidConfig;
  }
  try {
    ApplyConfig(app.get_subcommands().front());
    return action();
  } catch (const CLI::Error& e) {
    err << "invalid configuration: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const DomainError& e) {
    err << "invalid configuration: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const ShapeError& e) {
    err << "invalid configuration: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const PreconditionError& e) {
    err << "invalid configuration: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const SamplingError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace egamma::cli
