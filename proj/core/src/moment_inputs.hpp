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

// Private helpers shared by the moment evaluators: the scalar inputs
// (p, mu_j, u_a^2) converted once to either double or Rational.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "matprod/errors.hpp"
#include "matprod/model.hpp"
#include "matprod/path_moments.hpp"
#include "matprod/rational.hpp"

namespace matprod::detail {

template <class T>
struct ScalarInputs {
  T p;
  std::vector<T> mu;        // mu[j] = E[W^j], j = 0..max_order
  std::vector<T> u_square;  // u_a^2
};

inline ScalarInputs<double> double_inputs(const EnsembleConfig& config, const UnitVector& u, int max_order) {
  ScalarInputs<double> in;
  in.p = config.p;
  for (int j = 0; j <= max_order; ++j) in.mu.push_back(config.entry_law.moment(j));
  for (double x : u.coordinates()) in.u_square.push_back(x * x);
  return in;
}

inline std::optional<ScalarInputs<Rational>> rational_inputs(const EnsembleConfig& config, const UnitVector& u,
                                                             int max_order) {
  if (!u.has_exact_products()) return std::nullopt;
  ScalarInputs<Rational> in;
  in.p = to_rational(config.p);
  for (int j = 0; j <= max_order; ++j) {
    auto mu = config.entry_law.exact_moment(j);
    if (!mu) return std::nullopt;
    in.mu.push_back(*mu);
  }
  for (std::size_t a = 0; a < u.dimension(); ++a) in.u_square.push_back(*u.exact_product(a, a));
  return in;
}

inline double to_plain(double x) { return x; }
inline double to_plain(const Rational& x) { return to_double(x); }

inline bool in_asymptotic_regime(const EnsembleConfig& config, int k) {
  const auto widths = config.architecture.layer_widths();
  const std::size_t min_width = *std::min_element(widths.begin(), widths.end());
  const auto pairs = static_cast<std::size_t>(k) * static_cast<std::size_t>(k - 1) / 2;
  return pairs < min_width;
}

inline void check_order(int k, const MomentOptions& options) {
  if (k < 1) throw std::invalid_argument("moment order k must be >= 1");
  if (k > options.max_k) {
    throw std::invalid_argument("moment order k = " + std::to_string(k) + " exceeds the cap " +
                                std::to_string(options.max_k));
  }
}

inline void check_dimension(const EnsembleConfig& config, const UnitVector& u) {
  if (u.dimension() != config.architecture.input_width()) {
    throw DimensionMismatch("u has dimension " + std::to_string(u.dimension()) + ", expected n_0 = " +
                            std::to_string(config.architecture.input_width()));
  }
}

// n^e as a double, saturating at +inf.
inline double power_cost(double n, double e) { return std::pow(n, e); }

}  // namespace matprod::detail
