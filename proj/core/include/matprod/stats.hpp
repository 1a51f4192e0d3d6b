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

// Normal CDF, Kolmogorov-Smirnov statistics and summary statistics.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace matprod {

/// Phi((t - mean) / sqrt(variance)). Throws std::invalid_argument when
/// variance <= 0.
double normal_cdf(double t, double mean = 0.0, double variance = 1.0);

struct KSReport {
  double statistic = 0.0;
  std::size_t size_a = 0;
  std::size_t size_b = 0;  // 0 for a one-sample test
  std::string reference;
  double critical_value = 0.0;  // asymptotic 5% level
};

inline constexpr double kKsAlpha05 = 1.358;

/// sup |F_a - F_b|. Both inputs must be sorted ascending and nonempty
/// (EmptyBatch otherwise).
KSReport two_sample_ks(std::span<const double> a, std::span<const double> b);

/// sup_t |F_n(t) - F(t)| over both one-sided limits of F_n at every sample.
/// The sample must be sorted ascending and nonempty.
KSReport one_sample_ks(std::span<const double> sorted, const std::function<double(double)>& cdf,
                       std::string reference = "custom");

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double skewness = 0.0;  // sample skewness g1; 0 when variance is 0
  double min = 0.0;
  double q05 = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double q95 = 0.0;
  double max = 0.0;
};

/// Linear interpolation between order statistics, level in [0, 1].
double quantile(std::span<const double> sorted, double level);

/// Needs at least two values (InsufficientSamples otherwise); input need not
/// be sorted.
Summary summarize(std::span<const double> values);

}  // namespace matprod
