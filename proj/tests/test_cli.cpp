// Copyright 2026 The matprod Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "matprod/cli.hpp"

namespace matprod::cli {
namespace {

ExperimentConfig parse(std::vector<std::string> args) {
  args.insert(args.begin(), "matprod");
  return parse_config(args);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "matprod_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

int invoke(const std::vector<std::string>& args, std::string* out = nullptr, std::string* err = nullptr) {
  std::vector<const char*> argv{"matprod"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  const int status = main_entry(static_cast<int>(argv.size()), argv.data(), o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return status;
}

TEST(ParseConfig, MomentsExample) {
  auto config = parse({"moments", "--widths", "2,2", "--p", "1", "--dist", "rademacher", "--u", "e1", "--k", "1,2"});
  EXPECT_EQ(config.command, "moments");
  EXPECT_EQ(config.k, (std::vector<int>{1, 2}));
  EXPECT_EQ(config.widths, (std::vector<std::size_t>{2, 2}));
  EXPECT_EQ(config.dist, "rademacher");
  EXPECT_EQ(config.u, "e1");
}

TEST(ParseConfig, Defaults) {
  auto config = parse({"simulate", "--widths", "3,3"});
  EXPECT_EQ(config.trials, 100000u);
  EXPECT_EQ(config.seed, 0u);
  EXPECT_EQ(config.u, "uniform");
  EXPECT_EQ(config.format, OutputFormat::Csv);
  EXPECT_FALSE(config.assert_checks);
}

TEST(ParseConfig, BadProbability) {
  try {
    parse({"beta", "--widths", "2,2", "--p", "1.5"});
    FAIL();
  } catch (const UsageError& e) {
    EXPECT_NE(std::string(e.what()).find("--p"), std::string::npos);
    EXPECT_EQ(e.exit_code(), 2);
  }
  EXPECT_THROW(parse({"beta", "--widths", "2,2", "--p", "0"}), UsageError);
}

TEST(ParseConfig, MissingWidths) {
  try {
    parse({"beta", "--p", "0.5"});
    FAIL();
  } catch (const UsageError& e) {
    EXPECT_NE(std::string(e.what()).find("--widths"), std::string::npos);
  }
}

TEST(ParseConfig, UnknownFlagAndCommand) {
  EXPECT_THROW(parse({"beta", "--widths", "2,2", "--bogus", "1"}), UsageError);
  EXPECT_THROW(parse({"frobnicate", "--widths", "2,2"}), UsageError);
  EXPECT_THROW(parse({"--widths", "2,2"}), UsageError);
  EXPECT_THROW(parse({"beta", "--widths", "2,2", "--format", "xml"}), UsageError);
}

TEST(ParseConfig, WidthShorthand) {
  auto deep = parse_widths("64x16");
  ASSERT_EQ(deep.size(), 17u);
  for (auto n : deep) EXPECT_EQ(n, 64u);
  EXPECT_EQ(parse_widths("8,16x3"), (std::vector<std::size_t>{8, 16, 16, 16}));
  EXPECT_EQ(parse_widths("3,2,4"), (std::vector<std::size_t>{3, 2, 4}));
  EXPECT_THROW(parse_widths("5"), UsageError);
  EXPECT_THROW(parse_widths("5,0"), UsageError);
  EXPECT_THROW(parse_widths("5,ax2"), UsageError);
}

TEST(ParseConfig, ConfigFileFlagsWin) {
  const auto path = scratch("run.conf");
  {
    std::ofstream file(path);
    file << "widths=\"4,4,4\"\np=0.5\ntrials=77\nseed=9\n";
  }
  auto config = parse({"simulate", "--config", path.string(), "--seed", "3"});
  EXPECT_EQ(config.widths, (std::vector<std::size_t>{4, 4, 4}));
  EXPECT_EQ(config.p, 0.5);
  EXPECT_EQ(config.trials, 77u);
  EXPECT_EQ(config.seed, 3u);
}

TEST(Run, BetaExample) {
  auto config = parse({"beta", "--widths", "64x16", "--p", "0.5", "--dist", "gaussian", "--u", "e1"});
  auto report = execute(config);
  EXPECT_DOUBLE_EQ(report.table.number(0, "beta"), 1.25);
  EXPECT_DOUBLE_EQ(report.table.number(0, "term_width"), 1.25);
  EXPECT_DOUBLE_EQ(report.table.number(0, "term_fourth"), 0.0);
}

TEST(Run, MomentsExample) {
  auto config = parse({"moments", "--widths", "2,2", "--p", "1", "--dist", "rademacher", "--u", "uniform", "--k", "2",
                       "--trials", "100000"});
  auto report = execute(config);
  ASSERT_EQ(report.table.rows.size(), 1u);
  EXPECT_EQ(report.table.number(0, "k"), 2.0);
  EXPECT_EQ(report.table.number(0, "exact"), 1.5);
  EXPECT_EQ(report.table.number(0, "brute_force"), 1.5);
  EXPECT_NEAR(report.table.number(0, "theory"), std::exp(0.5), 1e-12);
  const double mc = report.table.number(0, "monte_carlo");
  EXPECT_LE(std::abs(mc - 1.5), 5.0 * report.table.number(0, "mc_stderr"));
  EXPECT_TRUE(report.passed());
}

TEST(Run, MomentsReportsBudgetReason) {
  auto config = parse({"moments", "--widths", "12x3", "--k", "2", "--trials", "10"});
  auto report = execute(config);
  EXPECT_TRUE(std::holds_alternative<std::monostate>(report.table.at(0, "brute_force")));
  const auto& reason = std::get<std::string>(report.table.at(0, "reason"));
  EXPECT_NE(reason.find("brute_force"), std::string::npos);
  EXPECT_NE(reason.find("estimated cost"), std::string::npos);
  EXPECT_FALSE(std::isnan(report.table.number(0, "exact")));
}

TEST(Run, CsvLayout) {
  std::string out;
  ASSERT_EQ(invoke({"moments", "--widths", "12x3", "--k", "1,2", "--trials", "10"}, &out), 0);
  std::istringstream lines(out);
  std::string comment, header, row;
  std::getline(lines, comment);
  std::getline(lines, header);
  std::getline(lines, row);
  EXPECT_EQ(comment.rfind("# matprod ", 0), 0u);
  EXPECT_NE(comment.find("fingerprint="), std::string::npos);
  EXPECT_NE(comment.find("seed=0"), std::string::npos);
  EXPECT_NE(comment.find(version()), std::string::npos);
  EXPECT_EQ(header, "k,exact,brute_force,monte_carlo,mc_stderr,theory,beta,zero_event_rate,reason");
  EXPECT_EQ(row.rfind("1,1,", 0), 0u);
  std::string second;
  std::getline(lines, second);
  EXPECT_NE(second.find(",brute_force: brute_force_moment (estimated cost"), std::string::npos) << second;
}

TEST(Run, CsvQuoting) {
  Report report;
  report.table.columns = {"text", "value"};
  report.table.rows.push_back({std::string("a,\"b\""), 2.5});
  report.table.rows.push_back({std::monostate{}, std::int64_t{7}});
  auto config = parse({"beta", "--widths", "2,2"});
  const std::string text = render(report, config);
  EXPECT_NE(text.find("\ntext,value\n\"a,\"\"b\"\"\",2.5\n,7\n"), std::string::npos) << text;
}

TEST(Run, JsonLines) {
  std::string out;
  ASSERT_EQ(invoke({"beta", "--widths", "2,2", "--dist", "rademacher", "--u", "e1", "--format", "json"}, &out), 0);
  std::istringstream lines(out);
  std::string meta_line, row_line;
  std::getline(lines, meta_line);
  std::getline(lines, row_line);
  auto meta = nlohmann::json::parse(meta_line);
  EXPECT_EQ(meta["meta"]["command"], "beta");
  auto row = nlohmann::json::parse(row_line);
  EXPECT_EQ(row["beta"].get<double>(), 0.0);
  EXPECT_EQ(row["beta_inv"], "inf");
  EXPECT_EQ(row["term_width"].get<double>(), 1.0);
}

TEST(Run, SeventeenDigits) {
  std::string out;
  ASSERT_EQ(invoke({"beta", "--widths", "3,3,7", "--format", "json"}, &out), 0);
  std::istringstream lines(out);
  std::string line;
  std::getline(lines, line);
  std::getline(lines, line);
  // beta = 2 (1/3 + 1/7) = 0.95238095238095233
  EXPECT_NE(line.find("\"beta\":0.95238095238095233"), std::string::npos) << line;
}

TEST(Run, ExitStatuses) {
  std::string out, err;
  EXPECT_EQ(invoke({"beta", "--widths", "2,2", "--p", "1.5"}, &out, &err), 2);
  EXPECT_NE(err.find("--p"), std::string::npos);
  EXPECT_EQ(invoke({"beta"}, &out, &err), 2);
  EXPECT_EQ(invoke({"chi2-check", "--widths", "4,4", "--p", "0.5", "--trials", "100"}, &out, &err), 2);
  EXPECT_EQ(invoke({"beta", "--widths", "2,2", "--dist", "discrete:2:0.5,-2:0.5"}, &out, &err), 2);
  EXPECT_EQ(invoke({"--help"}, &out, &err), 0);
  // Impossible tolerance with --assert fails; without --assert it does not.
  const std::vector<std::string> strict{"ks-test", "--widths", "4,4,4", "--trials", "500", "--tolerance", "0"};
  EXPECT_EQ(invoke(strict, &out, &err), 0);
  auto asserted = strict;
  asserted.push_back("--assert");
  EXPECT_EQ(invoke(asserted, &out, &err), 1);
  EXPECT_NE(err.find("check failed"), std::string::npos);
}

TEST(Run, ChiSquareCheckIsByteIdentical) {
  const auto a = scratch("chi2_a.csv");
  const auto b = scratch("chi2_b.csv");
  const std::string exe = MATPROD_EXE;
  const std::string base = exe + " chi2-check --widths 8,8 --trials 1000 --seed 7 --out ";
  ASSERT_EQ(std::system((base + a.string()).c_str()), 0);
  ASSERT_EQ(std::system(("MATPROD_THREADS=3 " + base + b.string()).c_str()), 0);
  const std::string first = read_file(a);
  EXPECT_FALSE(first.empty());
  EXPECT_EQ(first, read_file(b));
}

TEST(Run, JacobianCompareSmoke) {
  auto config = parse({"jacobian-compare", "--widths", "4,8,8", "--trials", "2000", "--seed", "1"});
  auto report = execute(config);
  EXPECT_EQ(report.table.number(0, "product_p"), 0.5);
  EXPECT_LE(report.table.number(0, "statistic"), 0.06);
  EXPECT_THROW(execute(parse({"jacobian-compare", "--widths", "4,8", "--dist", "rademacher", "--trials", "200"})),
               std::invalid_argument);
}

TEST(Run, SimulateSummary) {
  auto config = parse({"simulate", "--widths", "8x4", "--trials", "4000", "--seed", "2"});
  auto report = execute(config);
  EXPECT_EQ(report.table.number(0, "trials"), 4000.0);
  EXPECT_EQ(report.table.number(0, "zero_events"), 0.0);
  EXPECT_DOUBLE_EQ(report.table.number(0, "beta"), 1.0);
  EXPECT_TRUE(report.passed());
}

}  // namespace
}  // namespace matprod::cli
