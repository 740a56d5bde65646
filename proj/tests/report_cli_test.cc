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

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli.h"
#include "egamma/accountant.h"
#include "egamma/errors.h"
#include "egamma/experiments.h"
#include "egamma/report.h"
#include "json.hpp"

namespace egamma {
namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "egamma");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::Run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path TempFile(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() /
                    ("egamma_test_" + std::to_string(::getpid()) + "_" + name);
  std::ofstream(path) << body;
  return path;
}

TEST(TableTest, ShapeAndLookup) {
  Table t({"a", "b"});
  t.AddRow({1.0, std::string("x")});
  EXPECT_THROW(t.AddRow({1.0}), ShapeError);
  EXPECT_EQ(t.column("b"), 1u);
  EXPECT_EQ(t.number(0, "a"), 1.0);
  EXPECT_THROW(t.column("c"), ShapeError);
}

TEST(CsvTest, RoundTripIsExact) {
  Table t({"epsilon", "delta", "label"});
  t.AddRow({0.1, 1.0 / 3.0, std::string("one")});
  t.AddRow({2.0, 1e-310, std::string("two")});
  t.AddRow({-0.0, INFINITY, std::string("three")});
  const std::string csv = ToCsv(t);
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "epsilon,delta,label");
  const Table back = ParseCsv(csv);
  ASSERT_EQ(back.rows().size(), 3u);
  EXPECT_EQ(back.columns(), t.columns());
  EXPECT_EQ(back.number(0, "delta"), 1.0 / 3.0);
  EXPECT_EQ(back.number(1, "delta"), 1e-310);
  EXPECT_EQ(back.number(2, "delta"), INFINITY);
  EXPECT_EQ(std::get<std::string>(back.rows()[1][2]), "two");
  EXPECT_EQ(ToCsv(back), csv);
}

TEST(CsvTest, RejectsSeparatorsInCells) {
  Table t({"a"});
  t.AddRow({std::string("x,y")});
  EXPECT_THROW(ToCsv(t), DomainError);
}

TEST(JsonTest, Shape) {
  Table t({"epsilon", "delta"});
  t.AddRow({1.0, 0.5});
  t.AddRow({2.0, NAN});
  const auto j = ToJson(t, {{"command", "x"}});
  EXPECT_EQ(j["meta"]["command"], "x");
  ASSERT_EQ(j["rows"].size(), 2u);
  EXPECT_EQ(j["rows"][0]["delta"], 0.5);
  EXPECT_TRUE(j["rows"][1]["delta"].is_null());
  EXPECT_EQ(j["rows"][0].begin().key(), "epsilon");
}

TEST(FormatNumberTest, RoundTrips) {
  for (double x : {0.1, 1.0 / 7.0, 6.02214076e23, 5e-324}) {
    EXPECT_EQ(std::strtod(FormatNumber(x).c_str(), nullptr), x);
  }
  EXPECT_EQ(FormatNumber(-INFINITY), "-inf");
  EXPECT_EQ(FormatNumber(NAN), "nan");
}

TEST(ExperimentsTest, Chi2ExamplesTableColumns) {
  const auto rows = Chi2Examples();
  ASSERT_EQ(rows.size(), 4u);
  const Table t = Chi2ExamplesTable(rows);
  EXPECT_EQ(t.columns(), (std::vector<std::string>{"example", "computed", "expected",
                                                    "abs_diff"}));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(t.number(i, "abs_diff"), std::abs(rows[i].computed - rows[i].expected));
  }
}

TEST(ExperimentsTest, EpsGrid) {
  EXPECT_EQ((EpsGrid{2.0, 10.0, 0.25}.Values().size()), 33u);
  EXPECT_EQ((EpsGrid{1.0, 1.0, 0.5}.Values()), std::vector<double>{1.0});
  EXPECT_THROW((EpsGrid{2.0, 1.0, 0.5}.Validate()), DomainError);
  EXPECT_THROW((EpsGrid{0.0, 1.0, 0.0}.Validate()), DomainError);
}

TEST(CliTest, PnsgdMatchesLibrary) {
  const CliResult r = RunCli({"pnsgd", "--n", "100", "--eta", "0.05", "--sigma", "3",
                              "--smoothness", "1", "--smooth", "--eps-start", "4",
                              "--eps-stop", "4", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  PnsgdConfig c;
  c.n = 100;
  c.eta = 0.05;
  c.sigma = 3.0;
  c.smoothness = 1.0;
  EXPECT_EQ(j["rows"][0]["delta_closed_form"].get<double>(), PnsgdDelta(c, 4.0, true).delta);
  EXPECT_EQ(j["meta"]["mode"], "sound-max");
  EXPECT_EQ(j["meta"]["n"], 100);
}

TEST(CliTest, CsvOutputParses) {
  const CliResult r = RunCli({"theta", "--epsilon", "1", "--r-start", "0.5", "--r-stop", "2",
                              "--r-step", "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Table t = ParseCsv(r.out);
  ASSERT_EQ(t.rows().size(), 4u);
  EXPECT_EQ(t.columns().front(), "r");
  EXPECT_DOUBLE_EQ(t.number(3, "r"), 2.0);
}

TEST(CliTest, EverySubcommandRuns) {
  const std::vector<std::vector<std::string>> commands = {
      {"theta", "--gamma", "2"},
      {"pnsgd", "--mode", "paper-min"},
      {"compare-fig2", "--panel", "b"},
      {"chi2-examples"},
      {"binary-channel", "--a", "0.1", "--b", "0.4"},
      {"ogd", "--tradeoff", "lambda", "--lambda", "0.5"},
      {"ogd", "--tradeoff", "sigma", "--sigma", "1", "--simulate", "200"},
  };
  for (const auto& args : commands) {
    const CliResult r = RunCli(args);
    EXPECT_EQ(r.code, 0) << args.front() << ": " << r.err;
    EXPECT_FALSE(r.out.empty()) << args.front();
  }
}

TEST(CliTest, PaperMinIsFlagged) {
  const CliResult r = RunCli({"pnsgd", "--mode", "paper-min", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(nlohmann::json::parse(r.out)["meta"].contains("warning"));
}

TEST(CliTest, ExitCodes) {
  EXPECT_EQ(RunCli({}).code, 2);
  EXPECT_EQ(RunCli({"pnsgd", "--n", "0"}).code, 2);
  EXPECT_EQ(RunCli({"pnsgd", "--n", "ten"}).code, 2);
  EXPECT_EQ(RunCli({"theta", "--gamma", "2", "--epsilon", "1"}).code, 2);
  EXPECT_EQ(RunCli({"pnsgd", "--mode", "median"}).code, 2);
  EXPECT_EQ(RunCli({"pnsgd", "--format", "xml"}).code, 2);
  EXPECT_EQ(RunCli({"pnsgd", "--smooth", "--smoothness", "1", "--eta", "3"}).code, 2);
  EXPECT_EQ(RunCli({"ogd", "--tradeoff", "sigma", "--sigma", "1e-310", "--eps-start", "1",
                    "--eps-stop", "1"})
                .code,
            3);
  EXPECT_EQ(RunCli({"validate", "--suite", "discrete", "--bound-scale", "0.01"}).code, 4);
  EXPECT_EQ(RunCli({"validate", "--suite", "nonsense"}).code, 2);
}

TEST(CliTest, WritesOutputFile) {
  const auto path = TempFile("out.csv", "");
  const CliResult r = RunCli({"chi2-examples", "--out", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::stringstream body;
  body << in.rdbuf();
  EXPECT_EQ(ParseCsv(body.str()).rows().size(), 4u);
  std::filesystem::remove(path);
}

TEST(CliTest, ConfigFile) {
  const auto config = TempFile("pnsgd.conf", "n = 50\nsigma = 2\n");
  const CliResult from_file =
      RunCli({"pnsgd", "--config", config.string(), "--format", "json"});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  auto meta = nlohmann::json::parse(from_file.out)["meta"];
  EXPECT_EQ(meta["n"], 50);
  EXPECT_EQ(meta["sigma"], 2.0);
  // Command-line values take precedence over the file.
  const CliResult override =
      RunCli({"pnsgd", "--config", config.string(), "--n", "70", "--format", "json"});
  ASSERT_EQ(override.code, 0) << override.err;
  meta = nlohmann::json::parse(override.out)["meta"];
  EXPECT_EQ(meta["n"], 70);
  EXPECT_EQ(meta["sigma"], 2.0);
  const auto bad = TempFile("bad.conf", "horizon = 5\n");
  EXPECT_EQ(RunCli({"pnsgd", "--config", bad.string()}).code, 2);
  EXPECT_EQ(RunCli({"pnsgd", "--config", "/nonexistent/egamma.conf"}).code, 2);
  std::filesystem::remove(config);
  std::filesystem::remove(bad);
}

TEST(ValidateTest, DeterministicAndNegativeControl) {
  const ValidationReport a = Validate("discrete", 11);
  const ValidationReport b = Validate("discrete", 11);
  EXPECT_TRUE(a.all_pass());
  EXPECT_EQ(a.ToJson().dump(), b.ToJson().dump());
  EXPECT_FALSE(Validate("discrete", 11, 0.01).all_pass());
  EXPECT_THROW(Validate("everything", 1), DomainError);
}

}  // namespace
}  // namespace egamma
