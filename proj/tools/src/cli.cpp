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

#include "matprod/cli.hpp"

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "matprod/distribution.hpp"
#include "matprod/errors.hpp"
#include "matprod/model.hpp"
#include "matprod/monte_carlo.hpp"
#include "matprod/path_moments.hpp"
#include "matprod/relu_net.hpp"
#include "matprod/stats.hpp"

#ifndef MATPROD_VERSION
#define MATPROD_VERSION "0.0.0"
#endif

namespace matprod::cli {

namespace {

const std::vector<std::string> kCommands{"beta", "simulate", "moments", "ks-test", "chi2-check", "jacobian-compare"};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream stream(text);
  std::string part;
  while (std::getline(stream, part, sep)) parts.push_back(trim(part));
  return parts;
}

std::size_t parse_count(const std::string& token, const std::string& flag) {
  if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos) {
    throw UsageError(flag + ": '" + token + "' is not a positive integer");
  }
  const unsigned long long value = std::stoull(token);
  if (value == 0) throw UsageError(flag + ": widths must be >= 1");
  return static_cast<std::size_t>(value);
}

std::vector<int> parse_orders(const std::string& text) {
  std::vector<int> ks;
  for (const auto& token : split(text, ',')) {
    if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos) {
      throw UsageError("--k: '" + token + "' is not a positive integer");
    }
    ks.push_back(std::stoi(token));
    if (ks.back() < 1) throw UsageError("--k: moment orders must be >= 1");
  }
  if (ks.empty()) throw UsageError("--k: empty list");
  return ks;
}

std::vector<double> read_coordinates(const std::string& path, const std::string& flag) {
  std::ifstream in(path);
  if (!in) throw UsageError(flag + ": cannot read coordinate file '" + path + "'");
  std::vector<double> coords;
  std::string token;
  while (in >> token) {
    for (const auto& piece : split(token, ',')) {
      if (piece.empty()) continue;
      try {
        coords.push_back(std::stod(piece));
      } catch (const std::exception&) {
        throw UsageError(flag + ": bad number '" + piece + "' in '" + path + "'");
      }
    }
  }
  return coords;
}

UnitVector make_unit_vector(const std::string& choice, std::size_t n0) {
  if (choice == "e1") return UnitVector::e1(n0);
  if (choice == "uniform") return UnitVector::uniform(n0);
  auto coords = read_coordinates(choice, "--u");
  if (coords.size() != n0) {
    throw UsageError("--u: file has " + std::to_string(coords.size()) + " coordinates, expected n_0 = " +
                     std::to_string(n0));
  }
  return UnitVector::from_coordinates(std::move(coords));
}

std::vector<double> make_input(const std::string& choice, std::size_t n0) {
  if (choice == "ones") return default_input(n0);
  if (choice == "e1") {
    std::vector<double> x(n0, 0.0);
    x[0] = 1.0;
    return x;
  }
  auto coords = read_coordinates(choice, "--x");
  if (coords.size() != n0) throw UsageError("--x: expected " + std::to_string(n0) + " coordinates");
  return coords;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string widths_text(const std::vector<std::size_t>& widths) {
  std::string text;
  for (std::size_t i = 0; i < widths.size(); ++i) text += (i ? "," : "") + std::to_string(widths[i]);
  return text;
}

std::string csv_field(const Cell& cell) {
  std::string text;
  if (std::holds_alternative<double>(cell)) {
    text = format_number(std::get<double>(cell));
  } else if (std::holds_alternative<std::int64_t>(cell)) {
    text = std::to_string(std::get<std::int64_t>(cell));
  } else if (std::holds_alternative<std::string>(cell)) {
    text = std::get<std::string>(cell);
  }
  const bool quote = text.find_first_of(",\"\r\n") != std::string::npos ||
                     (!text.empty() && (text.front() == ' ' || text.back() == ' '));
  if (!quote) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string json_value(const Cell& cell) {
  if (std::holds_alternative<double>(cell)) {
    const double v = std::get<double>(cell);
    if (!std::isfinite(v)) return nlohmann::json(format_number(v)).dump();
    return format_number(v);
  }
  if (std::holds_alternative<std::int64_t>(cell)) return std::to_string(std::get<std::int64_t>(cell));
  if (std::holds_alternative<std::string>(cell)) return nlohmann::json(std::get<std::string>(cell)).dump();
  return "null";
}

Cell count(std::size_t n) { return static_cast<std::int64_t>(n); }

struct Setup {
  EnsembleConfig ensemble;
  UnitVector u;
};

Setup make_setup(const ExperimentConfig& config, double p) {
  DistributionSpec law = [&] {
    try {
      return parse_distribution(config.dist);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--dist: ") + e.what());
    }
  }();
  return Setup{EnsembleConfig(Architecture(config.widths), p, std::move(law)),
               make_unit_vector(config.u, config.widths.front())};
}

Check tolerance_check(const std::string& name, double statistic, double tolerance) {
  return Check{name, statistic <= tolerance,
               "statistic " + format_number(statistic) + (statistic <= tolerance ? " <= " : " > ") + "tolerance " +
                   format_number(tolerance)};
}

Report beta_report(const ExperimentConfig& config) {
  const Setup s = make_setup(config, config.p);
  const ErrorBudget budget = error_budget(s.ensemble, s.u);
  const ZeroEventProbability zero = zero_event_probability(s.ensemble);
  Report report;
  report.fingerprint = config_fingerprint(s.ensemble, s.u);
  report.table.columns = {"beta",      "term_width",  "term_fourth", "sum_inv_sq",          "beta_inv",
                          "fifth_root", "half_power", "mask_term",   "zero_event_probability", "zero_event_exact"};
  report.table.rows.push_back({budget.beta.beta, budget.beta.term_width, budget.beta.term_fourth, budget.sum_inv_sq,
                               budget.beta_inv, budget.fifth_root, budget.half_power, budget.mask_term, zero.value,
                               std::string(zero.exact ? "true" : "false")});
  return report;
}

Report simulate_report(const ExperimentConfig& config) {
  const Setup s = make_setup(config, config.p);
  const BetaParams beta = compute_beta(s.ensemble, s.u);
  const SampleBatch batch = run_trials(s.ensemble, s.u, config.trials, config.seed, RunOptions{});
  Report report;
  report.fingerprint = batch.fingerprint;
  report.table.columns = {"trials",   "samples",  "zero_events", "zero_event_rate", "mean",     "variance",
                          "skewness", "q05",      "median",      "q95",             "beta",     "theory_mean",
                          "theory_variance", "moment1", "moment1_stderr"};
  std::vector<Cell> row{count(batch.trials), count(batch.samples.size()), count(batch.zero_event_count),
                        batch.zero_event_rate()};
  if (batch.samples.size() >= 2) {
    const Summary summary = summarize(batch.samples);
    row.insert(row.end(), {summary.mean, summary.variance, summary.skewness, summary.q05, summary.median, summary.q95});
  } else {
    row.insert(row.end(), 6, std::monostate{});
  }
  row.insert(row.end(), {beta.beta, -0.5 * beta.beta, beta.beta});
  if (batch.trials >= 2) {
    const MomentEstimate m1 = empirical_moment(batch, 1);
    row.insert(row.end(), {m1.estimate, m1.standard_error});
    report.checks.push_back(Check{"first moment within 5 stderr of 1",
                                  std::abs(m1.estimate - 1.0) <= 5.0 * m1.standard_error,
                                  "estimate " + format_number(m1.estimate) + " stderr " +
                                      format_number(m1.standard_error)});
  } else {
    row.insert(row.end(), 2, std::monostate{});
  }
  report.table.rows.push_back(std::move(row));
  return report;
}

Report moments_report(const ExperimentConfig& config) {
  const Setup s = make_setup(config, config.p);
  const BetaParams beta = compute_beta(s.ensemble, s.u);
  MomentOptions options;
  options.budget = config.budget;

  Report report;
  report.fingerprint = config_fingerprint(s.ensemble, s.u);
  report.table.columns = {"k",      "exact", "brute_force",     "monte_carlo", "mc_stderr",
                          "theory", "beta",  "zero_event_rate", "reason"};

  std::optional<SampleBatch> batch;
  if (config.trials >= 2) batch = run_trials(s.ensemble, s.u, config.trials, config.seed, RunOptions{});

  for (int k : config.k) {
    std::vector<Cell> row{static_cast<std::int64_t>(k)};
    std::vector<std::string> reasons;
    std::optional<double> exact;
    std::optional<double> brute;
    try {
      exact = exact_moment(s.ensemble, s.u, k, options).value;
    } catch (const BudgetExceeded& e) {
      reasons.push_back(std::string("exact: ") + e.what());
    } catch (const std::invalid_argument& e) {
      reasons.push_back(std::string("exact: ") + e.what());
    }
    try {
      brute = brute_force_moment(s.ensemble, s.u, k, options).value;
    } catch (const BudgetExceeded& e) {
      reasons.push_back(std::string("brute_force: ") + e.what());
    } catch (const std::invalid_argument& e) {
      reasons.push_back(std::string("brute_force: ") + e.what());
    }
    row.push_back(exact ? Cell(*exact) : Cell());
    row.push_back(brute ? Cell(*brute) : Cell());
    std::optional<MomentEstimate> mc;
    if (batch) {
      mc = empirical_moment(*batch, k);
      row.push_back(mc->estimate);
      row.push_back(mc->standard_error);
    } else {
      reasons.push_back("monte_carlo: needs --trials >= 2");
      row.insert(row.end(), 2, std::monostate{});
    }
    const double theory = theory_moment(beta, k);
    row.push_back(theory);
    row.push_back(beta.beta);
    row.push_back(batch ? Cell(batch->zero_event_rate()) : Cell());
    std::string reason;
    for (std::size_t j = 0; j < reasons.size(); ++j) reason += (j ? "; " : "") + reasons[j];
    row.push_back(reason);
    report.table.rows.push_back(std::move(row));

    if (exact && brute) {
      const double gap = std::abs(*exact - *brute);
      report.checks.push_back(Check{"k=" + std::to_string(k) + " exact matches brute force",
                                    gap <= 1e-10 * std::max(1.0, std::abs(*exact)),
                                    "gap " + format_number(gap)});
    }
    if (mc && config.tolerance) {
      const double rel = std::abs(mc->estimate / theory - 1.0);
      report.checks.push_back(
          tolerance_check("k=" + std::to_string(k) + " Monte Carlo relative to theory", rel, *config.tolerance));
    }
  }
  return report;
}

Report ks_report(const ExperimentConfig& config) {
  const Setup s = make_setup(config, config.p);
  const BetaParams beta = compute_beta(s.ensemble, s.u);
  if (!(beta.beta > 0.0)) throw UsageError("ks-test: beta must be positive for a Gaussian reference");
  const SampleBatch batch = run_trials(s.ensemble, s.u, config.trials, config.seed, RunOptions{});
  const KSReport ks = ks_to_gaussian(batch, -0.5 * beta.beta, beta.beta);
  const double tolerance = config.tolerance.value_or(0.02);
  Report report;
  report.fingerprint = batch.fingerprint;
  report.table.columns = {"statistic", "critical_value", "tolerance", "samples",     "zero_events",
                          "beta",      "mean",           "variance",  "theory_mean", "theory_variance"};
  std::vector<Cell> row{ks.statistic, ks.critical_value, tolerance, count(batch.samples.size()),
                        count(batch.zero_event_count), beta.beta};
  if (batch.samples.size() >= 2) {
    const Summary summary = summarize(batch.samples);
    row.insert(row.end(), {summary.mean, summary.variance});
  } else {
    row.insert(row.end(), 2, std::monostate{});
  }
  row.insert(row.end(), {-0.5 * beta.beta, beta.beta});
  report.table.rows.push_back(std::move(row));
  report.checks.push_back(tolerance_check("KS distance to Normal(-beta/2, beta)", ks.statistic, tolerance));
  return report;
}

Report chi2_report(const ExperimentConfig& config) {
  const Setup s = make_setup(config, config.p);
  if (config.p != 1.0 || s.ensemble.entry_law.kind() != LawKind::StandardGaussian) {
    throw UsageError("chi2-check: requires --p 1 and --dist gaussian");
  }
  const SampleBatch product = run_trials(s.ensemble, s.u, config.trials, config.seed, RunOptions{});
  const auto layer_widths = s.ensemble.architecture.layer_widths();
  const SampleBatch chi = chi_square_product_sampler(layer_widths, config.trials, config.seed, RunOptions{});
  const KSReport ks = two_sample_ks(product.samples, chi.samples);
  const double tolerance = config.tolerance.value_or(2.0 * ks.critical_value);
  Report report;
  report.fingerprint = product.fingerprint;
  report.table.columns = {"statistic", "critical_value", "tolerance", "product_samples", "chi2_samples",
                          "product_mean", "chi2_mean"};
  report.table.rows.push_back({ks.statistic, ks.critical_value, tolerance, count(product.samples.size()),
                               count(chi.samples.size()), summarize(product.samples).mean,
                               summarize(chi.samples).mean});
  report.checks.push_back(tolerance_check("two-sample KS, product vs chi-square oracle", ks.statistic, tolerance));
  return report;
}

Report jacobian_report(const ExperimentConfig& config) {
  DistributionSpec law = parse_distribution(config.dist);
  const ReluNetConfig net(Architecture(config.widths), law, config.bias_scale);
  const UnitVector u = make_unit_vector(config.u, config.widths.front());
  const std::vector<double> x = make_input(config.x, config.widths.front());
  const JacobianComparison cmp =
      compare_jacobian_vs_product(net, x, u, config.trials, config.seed, config.product_p, RunOptions{});
  const double tolerance = config.tolerance.value_or(0.02);
  Report report;
  report.fingerprint = cmp.jacobian.fingerprint;
  report.table.columns = {"statistic",         "critical_value",        "tolerance",
                          "jacobian_samples",  "jacobian_zero_events",  "product_samples",
                          "product_zero_events", "product_p",           "evgp_beta",
                          "jacobian_mean",     "jacobian_variance",     "product_mean",
                          "product_variance"};
  const Summary js = summarize(cmp.jacobian.samples);
  const Summary ps = summarize(cmp.product.samples);
  report.table.rows.push_back({cmp.ks.statistic, cmp.ks.critical_value, tolerance, count(cmp.jacobian.samples.size()),
                               count(cmp.jacobian.zero_event_count), count(cmp.product.samples.size()),
                               count(cmp.product.zero_event_count), config.product_p, evgp_beta(net, u).beta, js.mean,
                               js.variance, ps.mean, ps.variance});
  report.checks.push_back(tolerance_check("two-sample KS, Jacobian vs product", cmp.ks.statistic, tolerance));
  return report;
}

}  // namespace

std::string version() { return MATPROD_VERSION; }

std::vector<std::size_t> parse_widths(const std::string& text) {
  std::vector<std::size_t> widths;
  const auto tokens = split(text, ',');
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    const std::string& token = tokens[t];
    const auto cross = token.find('x');
    if (cross == std::string::npos) {
      widths.push_back(parse_count(token, "--widths"));
      continue;
    }
    const std::size_t n = parse_count(token.substr(0, cross), "--widths");
    const std::size_t copies = parse_count(token.substr(cross + 1), "--widths");
    if (widths.empty()) widths.push_back(n);  // leading NxD also supplies n_0
    widths.insert(widths.end(), copies, n);
  }
  if (widths.size() < 2) throw UsageError("--widths: need n_0 and at least one layer width");
  return widths;
}

const Cell& Table::at(std::size_t row, const std::string& column) const {
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] == column) return rows.at(row).at(c);
  }
  throw std::out_of_range("no column '" + column + "'");
}

double Table::number(std::size_t row, const std::string& column) const {
  const Cell& cell = at(row, column);
  if (std::holds_alternative<double>(cell)) return std::get<double>(cell);
  if (std::holds_alternative<std::int64_t>(cell)) return static_cast<double>(std::get<std::int64_t>(cell));
  return std::numeric_limits<double>::quiet_NaN();
}

bool Report::passed() const {
  for (const auto& check : checks) {
    if (!check.passed) return false;
  }
  return true;
}

ExperimentConfig parse_config(const std::vector<std::string>& args) {
  ExperimentConfig config;
  CLI::App app{"Random matrix product laboratory", "matprod"};
  app.set_version_flag("--version", MATPROD_VERSION);
  app.set_config("--config", "", "key=value file supplying defaults for any flag");
  app.require_subcommand(1, 1);
  for (const auto& name : kCommands) app.add_subcommand(name)->fallthrough();

  std::string widths;
  std::string ks = "1,2";
  std::string format = "csv";
  double tolerance = std::numeric_limits<double>::quiet_NaN();
  app.add_option("--widths", widths, "n_0,...,n_d; NxD repeats N D times (after n_0)");
  app.add_option("--p", config.p, "mask probability in (0, 1]");
  app.add_option("--dist", config.dist, "gaussian | rademacher | uniform | discrete:v:p,...");
  app.add_option("--u", config.u, "e1 | uniform | coordinate file");
  app.add_option("--trials", config.trials, "Monte Carlo trials");
  app.add_option("--seed", config.seed, "base seed");
  app.add_option("--k", ks, "moment orders, comma separated");
  app.add_option("--out", config.out, "output path (default: stdout)");
  app.add_option("--format", format, "csv | json");
  app.add_flag("--assert", config.assert_checks, "exit 1 when a check fails");
  app.add_option("--budget", config.budget, "cost budget for exact enumeration");
  app.add_option("--x", config.x, "jacobian-compare input: ones | e1 | coordinate file");
  app.add_option("--product-p", config.product_p, "jacobian-compare product-side mask probability");
  app.add_option("--bias-scale", config.bias_scale, "ReLU bias scale");
  app.add_option("--tolerance", tolerance, "acceptance tolerance for --assert");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw UsageError(app.help(), 0);
  } catch (const CLI::CallForVersion&) {
    throw UsageError(std::string("matprod ") + MATPROD_VERSION, 0);
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  for (const auto* sub : app.get_subcommands()) config.command = sub->get_name();
  if (widths.empty()) throw UsageError("--widths is required");
  config.widths = parse_widths(widths);
  if (!(config.p > 0.0 && config.p <= 1.0)) throw UsageError("--p must lie in (0, 1]");
  if (!(config.product_p > 0.0 && config.product_p <= 1.0)) throw UsageError("--product-p must lie in (0, 1]");
  if (!(config.bias_scale > 0.0)) throw UsageError("--bias-scale must be positive");
  if (!(config.budget > 0.0)) throw UsageError("--budget must be positive");
  config.k = parse_orders(ks);
  if (format == "csv") {
    config.format = OutputFormat::Csv;
  } else if (format == "json") {
    config.format = OutputFormat::Json;
  } else {
    throw UsageError("--format must be csv or json");
  }
  if (!std::isnan(tolerance)) {
    if (!(tolerance >= 0.0)) throw UsageError("--tolerance must be nonnegative");
    config.tolerance = tolerance;
  }
  return config;
}

ExperimentConfig parse_config(int argc, const char* const* argv) {
  return parse_config(std::vector<std::string>(argv, argv + argc));
}

Report execute(const ExperimentConfig& config) {
  if (config.command == "beta") return beta_report(config);
  if (config.command == "simulate") return simulate_report(config);
  if (config.command == "moments") return moments_report(config);
  if (config.command == "ks-test") return ks_report(config);
  if (config.command == "chi2-check") return chi2_report(config);
  if (config.command == "jacobian-compare") return jacobian_report(config);
  throw UsageError("unknown command '" + config.command + "'");
}

std::string render(const Report& report, const ExperimentConfig& config) {
  std::ostringstream out;
  if (config.format == OutputFormat::Csv) {
    out << "# matprod " << MATPROD_VERSION << " command=" << config.command
        << " fingerprint=" << report.fingerprint << " seed=" << config.seed << " trials=" << config.trials
        << " widths=" << widths_text(config.widths) << " p=" << format_number(config.p) << " dist=" << config.dist
        << " u=" << config.u << "\n";
    for (std::size_t c = 0; c < report.table.columns.size(); ++c) {
      out << (c ? "," : "") << csv_field(report.table.columns[c]);
    }
    out << "\n";
    for (const auto& row : report.table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_field(row[c]);
      out << "\n";
    }
    return out.str();
  }
  nlohmann::ordered_json meta;
  meta["matprod"] = MATPROD_VERSION;
  meta["command"] = config.command;
  meta["fingerprint"] = report.fingerprint;
  meta["seed"] = config.seed;
  meta["trials"] = config.trials;
  meta["widths"] = config.widths;
  meta["dist"] = config.dist;
  meta["u"] = config.u;
  out << "{\"meta\":" << meta.dump() << "}\n";
  for (const auto& row : report.table.rows) {
    out << "{";
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << (c ? "," : "") << nlohmann::json(report.table.columns[c]).dump() << ":" << json_value(row[c]);
    }
    out << "}\n";
  }
  return out.str();
}

int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  Report report;
  try {
    report = execute(config);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return 2;
  }
  const std::string text = render(report, config);
  if (config.out.empty()) {
    out << text;
  } else {
    std::ofstream file(config.out, std::ios::binary);
    if (!file) {
      err << "error: cannot write '" << config.out << "'\n";
      return 1;
    }
    file << text;
  }
  int status = 0;
  if (config.assert_checks) {
    for (const auto& check : report.checks) {
      if (!check.passed) {
        err << "check failed: " << check.name << " (" << check.detail << ")\n";
        status = 1;
      }
    }
  }
  return status;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  ExperimentConfig config;
  try {
    config = parse_config(argc, argv);
  } catch (const UsageError& e) {
    (e.exit_code() == 0 ? out : err) << e.what() << "\n";
    return e.exit_code();
  }
  return run(config, out, err);
}

}  // namespace matprod::cli
