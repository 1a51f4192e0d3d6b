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

// The masked random product ensemble
//
//   M = X_d ... X_1,   X_i = (p n_{i-1})^{-1/2} D_i W_i,
//
// with D_i an n_i x n_i diagonal Bernoulli(p) mask and W_i an n_i x n_{i-1}
// matrix of i.i.d. entries. The quantity of interest is
//
//   L_d = ln Z_d(u),   Z_d(u) = (n_0 / n_d) |M u|^2,
//
// which is accumulated one layer at a time from the unit direction of the
// propagated vector, so the product matrix is never formed.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "matprod/distribution.hpp"
#include "matprod/rational.hpp"
#include "matprod/rng.hpp"

namespace matprod {

/// Layer widths n_0, ..., n_d with d >= 1 and every n_i >= 1.
class Architecture {
 public:
  explicit Architecture(std::vector<std::size_t> widths);

  std::size_t depth() const noexcept { return widths_.size() - 1; }
  std::size_t width(std::size_t layer) const { return widths_.at(layer); }
  std::size_t input_width() const noexcept { return widths_.front(); }
  std::size_t output_width() const noexcept { return widths_.back(); }
  std::span<const std::size_t> widths() const noexcept { return widths_; }
  // n_1, ..., n_d
  std::span<const std::size_t> layer_widths() const noexcept {
    return std::span<const std::size_t>(widths_).subspan(1);
  }

  bool operator==(const Architecture&) const = default;

 private:
  std::vector<std::size_t> widths_;
};

struct EnsembleConfig {
  EnsembleConfig(Architecture architecture, double p, DistributionSpec entry_law);

  Architecture architecture;
  double p;
  DistributionSpec entry_law;

  bool atomless() const noexcept { return entry_law.atomless(); }
};

/// Unit vector u in R^{n_0} with cached l2 norm and l4 norm to the fourth.
///
/// `e1` and `uniform` keep exact rational squared coordinates so the exact
/// moment engines can run in rational arithmetic.
class UnitVector {
 public:
  static UnitVector e1(std::size_t dimension);
  static UnitVector uniform(std::size_t dimension);
  /// Normalizes the given coordinates; throws if they are all zero.
  static UnitVector from_coordinates(std::vector<double> coordinates);

  std::size_t dimension() const noexcept { return coords_.size(); }
  std::span<const double> coordinates() const noexcept { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }
  double norm2() const noexcept { return norm2_; }
  double norm4_pow4() const noexcept { return norm4_pow4_; }

  bool has_exact_products() const noexcept { return kind_ != Kind::General; }
  /// Exact u_a * u_b when available.
  std::optional<Rational> exact_product(std::size_t a, std::size_t b) const;

  std::string description() const;

 private:
  enum class Kind { Basis, Uniform, General };

  UnitVector(Kind kind, std::vector<double> coords);

  Kind kind_;
  std::vector<double> coords_;
  double norm2_ = 0.0;
  double norm4_pow4_ = 0.0;
};

struct BetaParams {
  double beta = 0.0;
  double term_width = 0.0;   // (3/p - 1) * sum_i 1/n_i
  double term_fourth = 0.0;  // (mu_4 - 3)/(p n_1) * |u|_4^4
};

/// Throws DimensionMismatch when dim(u) != n_0.
BetaParams compute_beta(const EnsembleConfig& config, const UnitVector& u);

struct LayerState {
  std::vector<double> direction;  // unit-norm u^(i) / |u^(i)|
  double log_norm = 0.0;          // ln |u^(i)|^2, telescoped
  std::size_t layer = 0;
  bool zero = false;

  static LayerState initial(const UnitVector& u);
};

/// Samples mask D_i then weights W_i (row-major) from `rng` and advances
/// the state by v = (p n_i)^{-1/2} D_i W_i u_hat. A vanishing v sets the zero
/// flag; the log accumulator is never evaluated at 0.
LayerState propagate_layer(const LayerState& state, std::size_t layer,
                           const EnsembleConfig& config, RngStream& rng);

/// ln Z_d(u), or nullopt when some layer annihilates the vector.
using LogNormSample = std::optional<double>;

LogNormSample sample_log_norm(const EnsembleConfig& config, const UnitVector& u, RngStream& rng);

/// Draws the same masks and weights `propagate_layer` would for `layer`,
/// in the same order. Intended for tests and the dense-product cross-check.
struct LayerDraw {
  std::vector<std::uint8_t> mask;  // n_i entries, 1 = open
  std::vector<double> weights;     // n_i x n_{i-1}, row-major
};
LayerDraw draw_layer(std::size_t layer, const EnsembleConfig& config, RngStream& rng);

/// Variance of |(np)^{-1/2} D W u|^2 / |u|^2 for a fixed nonzero u.
double predict_layer_variance(std::span<const double> u, std::size_t n_next, double p, double mu4);

struct ZeroEventProbability {
  double value = 0.0;
  // False for atom-bearing laws, where `value` is only a lower bound.
  bool exact = true;
};

/// 1 - prod_j (1 - (1-p)^{n_j}).
ZeroEventProbability zero_event_probability(const EnsembleConfig& config);

/// Raw magnitudes of the Kolmogorov-Smirnov error terms (no constants).
/// Beta-dependent terms are +inf when beta <= 0.
struct ErrorBudget {
  double sum_inv_sq = 0.0;          // sum_i n_i^{-2}
  double beta_inv = 0.0;            // beta^{-1} sum_i n_i^{-2}
  double fifth_root = 0.0;          // (beta^{-2} sum_i n_i^{-2})^{1/5}
  double half_power = 0.0;          // (beta^{-1/2} sum_i n_i^{-2})^{1/2}
  double mask_term = 0.0;           // sum_i (1-p)^{n_i}
  BetaParams beta;
};

ErrorBudget error_budget(const EnsembleConfig& config, const UnitVector& u);

}  // namespace matprod
