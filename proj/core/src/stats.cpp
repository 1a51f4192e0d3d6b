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

#include "matprod/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "matprod/errors.hpp"

namespace matprod {

double normal_cdf(double t, double mean, double variance) {
  if (!(variance > 0.0)) throw std::invalid_argument("normal_cdf: variance must be positive");
  const double z = (t - mean) / std::sqrt(variance);
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

KSReport two_sample_ks(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw EmptyBatch("two_sample_ks: empty sample");
  const double m = static_cast<double>(a.size());
  const double n = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double sup = 0.0;
  // Walk the merged support; after consuming every copy of the current value
  // from both sides, both ECDFs are right-continuous values at that point.
  while (i < a.size() && j < b.size()) {
    const double t = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == t) ++i;
    while (j < b.size() && b[j] == t) ++j;
    sup = std::max(sup, std::abs(static_cast<double>(i) / m - static_cast<double>(j) / n));
  }
  sup = std::max(sup, std::abs(static_cast<double>(i) / m - static_cast<double>(j) / n));
  KSReport report;
  report.statistic = sup;
  report.size_a = a.size();
  report.size_b = b.size();
  report.reference = "two-sample";
  report.critical_value = kKsAlpha05 * std::sqrt((m + n) / (m * n));
  return report;
}

KSReport one_sample_ks(std::span<const double> sorted, const std::function<double(double)>& cdf,
                       std::string reference) {
  if (sorted.empty()) throw EmptyBatch("one_sample_ks: empty sample");
  const double n = static_cast<double>(sorted.size());
  double sup = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    const double t = sorted[i];
    const double below = static_cast<double>(i) / n;  // F_n(t-)
    while (i < sorted.size() && sorted[i] == t) ++i;
    const double at = static_cast<double>(i) / n;     // F_n(t)
    const double f = cdf(t);
    sup = std::max({sup, std::abs(f - below), std::abs(at - f)});
  }
  KSReport report;
  report.statistic = std::min(sup, 1.0);
  report.size_a = sorted.size();
  report.reference = std::move(reference);
  report.critical_value = kKsAlpha05 / std::sqrt(n);
  return report;
}

double quantile(std::span<const double> sorted, double level) {
  if (sorted.empty()) throw EmptyBatch("quantile: empty sample");
  if (level < 0.0 || level > 1.0) throw std::invalid_argument("quantile: level outside [0, 1]");
  const double position = level * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(position));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = position - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

Summary summarize(std::span<const double> values) {
  if (values.size() < 2) throw InsufficientSamples("summary needs at least two samples");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());

  Summary s;
  s.count = sorted.size();
  double sum = 0.0;
  for (double x : sorted) sum += x;
  s.mean = sum / n;
  double m2 = 0.0;
  double m3 = 0.0;
  for (double x : sorted) {
    const double dev = x - s.mean;
    m2 += dev * dev;
    m3 += dev * dev * dev;
  }
  s.variance = m2 / (n - 1.0);
  if (m2 > 0.0) s.skewness = (m3 / n) / std::pow(m2 / n, 1.5);
  s.min = sorted.front();
  s.max = sorted.back();
  s.q05 = quantile(sorted, 0.05);
  s.q25 = quantile(sorted, 0.25);
  s.median = quantile(sorted, 0.5);
  s.q75 = quantile(sorted, 0.75);
  s.q95 = quantile(sorted, 0.95);
  return s;
}

}  // namespace matprod
