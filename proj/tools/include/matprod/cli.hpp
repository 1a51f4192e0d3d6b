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

#pragma once

// The `matprod` command line: argument parsing, experiment dispatch and
// CSV / JSON-lines rendering.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace matprod::cli {

/// Bad command line; `what()` names the offending flag. Exit status 2,
/// or 0 for --help / --version.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& message, int exit_code = 2)
      : std::runtime_error(message), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

enum class OutputFormat { Csv, Json };

struct ExperimentConfig {
  std::string command;  // beta | simulate | moments | ks-test | chi2-check | jacobian-compare
  std::vector<std::size_t> widths;
  double p = 1.0;
  std::string dist = "gaussian";
  std::string u = "uniform";  // e1 | uniform | path to a coordinate file
  std::size_t trials = 100000;
  std::uint64_t seed = 0;
  std::vector<int> k{1, 2};
  std::string out;  // empty: standard output
  OutputFormat format = OutputFormat::Csv;
  bool assert_checks = false;
  double budget = 1e8;
  std::string x = "ones";  // jacobian-compare input: ones | e1 | path
  double product_p = 0.5;
  double bias_scale = 1.0;
  std::optional<double> tolerance;
};

/// "64x16" -> 64 followed by 16 copies of 64; "8,16x3" -> 8,16,16,16.
std::vector<std::size_t> parse_widths(const std::string& text);

/// argv[0] is the program name. A `--config FILE` of key=value lines
/// supplies defaults; flags on the command line win.
ExperimentConfig parse_config(int argc, const char* const* argv);
ExperimentConfig parse_config(const std::vector<std::string>& args);

using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Value in `column` of row `row`; throws std::out_of_range if absent.
  const Cell& at(std::size_t row, const std::string& column) const;
  double number(std::size_t row, const std::string& column) const;
};

struct Check {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct Report {
  Table table;
  std::vector<Check> checks;
  std::string fingerprint;

  bool passed() const;
};

/// Runs the experiment without writing anything.
Report execute(const ExperimentConfig& config);

/// CSV: a "# matprod ..." comment line, a header row, then data rows.
/// JSON: one metadata object, then one object per row.
std::string render(const Report& report, const ExperimentConfig& config);

/// execute + render + write; returns the exit status (0, 1 on a failed
/// --assert check, 2 on usage errors).
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// Full entry point used by the executable.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

std::string version();

}  // namespace matprod::cli
