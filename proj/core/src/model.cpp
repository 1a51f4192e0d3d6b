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

#include "matprod/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "matprod/errors.hpp"

namespace matprod {

Architecture::Architecture(std::vector<std::size_t> widths) : widths_(std::move(widths)) {
  if (widths_.size() < 2) {
    throw std::invalid_argument("architecture needs n_0 and at least one layer width (d >= 1)");
  }
  if (std::any_of(widths_.begin(), widths_.end(), [](std::size_t n) { return n == 0; })) {
    throw std::invalid_argument("architecture widths must be positive");
  }
}

EnsembleConfig::EnsembleConfig(Architecture arch, double mask_p, DistributionSpec law)
    : architecture(std::move(arch)), p(mask_p), entry_law(validate_distribution(std::move(law))) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::invalid_argument("mask probability p must lie in (0, 1]");
  }
}

UnitVector::UnitVector(Kind kind, std::vector<double> coords) : kind_(kind), coords_(std::move(coords)) {
  double sq = 0.0;
  double quartic = 0.0;
  for (double x : coords_) {
    sq += x * x;
    quartic += x * x * x * x;
  }
  norm2_ = std::sqrt(sq);
  norm4_pow4_ = quartic;
}

UnitVector UnitVector::e1(std::size_t dimension) {
  if (dimension == 0) throw std::invalid_argument("unit vector dimension must be positive");
  std::vector<double> coords(dimension, 0.0);
  coords[0] = 1.0;
  return UnitVector(Kind::Basis, std::move(coords));
}

UnitVector UnitVector::uniform(std::size_t dimension) {
  if (dimension == 0) throw std::invalid_argument("unit vector dimension must be positive");
  const double entry = 1.0 / std::sqrt(static_cast<double>(dimension));
  UnitVector u(Kind::Uniform, std::vector<double>(dimension, entry));
  // Closed forms: |u|_2 = 1, |u|_4^4 = 1/n.
  u.norm2_ = 1.0;
  u.norm4_pow4_ = 1.0 / static_cast<double>(dimension);
  return u;
}

UnitVector UnitVector::from_coordinates(std::vector<double> coordinates) {
  if (coordinates.empty()) throw std::invalid_argument("unit vector dimension must be positive");
  // Scale first so huge or tiny inputs do not overflow the squared norm.
  const double scale = std::abs(*std::max_element(coordinates.begin(), coordinates.end(),
                                                  [](double a, double b) { return std::abs(a) < std::abs(b); }));
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("unit vector coordinates must be finite and not all zero");
  }
  double sq = 0.0;
  for (double& x : coordinates) {
    x /= scale;
    sq += x * x;
  }
  const double norm = std::sqrt(sq);
  for (double& x : coordinates) x /= norm;
  return UnitVector(Kind::General, std::move(coordinates));
}

std::optional<Rational> UnitVector::exact_product(std::size_t a, std::size_t b) const {
  switch (kind_) {
    case Kind::Basis:
      return Rational(a == 0 && b == 0 ? 1 : 0);
    case Kind::Uniform:
      return Rational(1, static_cast<long long>(coords_.size()));
    case Kind::General:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string UnitVector::description() const {
  switch (kind_) {
    case Kind::Basis:
      return "e1";
    case Kind::Uniform:
      return "uniform";
    case Kind::General:
      break;
  }
  return "custom(" + std::to_string(coords_.size()) + ")";
}

BetaParams compute_beta(const EnsembleConfig& config, const UnitVector& u) {
  const Architecture& arch = config.architecture;
  if (u.dimension() != arch.input_width()) {
    throw DimensionMismatch("u has dimension " + std::to_string(u.dimension()) + ", expected n_0 = " +
                            std::to_string(arch.input_width()));
  }
  double inverse_sum = 0.0;
  for (std::size_t n : arch.layer_widths()) inverse_sum += 1.0 / static_cast<double>(n);

  BetaParams params;
  params.term_width = (3.0 / config.p - 1.0) * inverse_sum;
  params.term_fourth = (config.entry_law.fourth_moment() - 3.0) /
                       (config.p * static_cast<double>(arch.width(1))) * u.norm4_pow4();
  params.beta = params.term_width + params.term_fourth;
  return params;
}

LayerState LayerState::initial(const UnitVector& u) {
  LayerState state;
  state.direction.assign(u.coordinates().begin(), u.coordinates().end());
  return state;
}

namespace {

// One layer of the normalized recursion. Draw order: n_out mask bits (skipped
// when p == 1), then the n_out x n_in weights row by row. Writes D W in to
// `out` and returns its squared norm; the (p n_out)^{-1} factor is applied by
// the caller in one division so that exact cases stay exact.
template <class Draw>
double advance_layer(std::span<const double> in, std::span<double> out, double p, Draw& draw,
                     RngStream& rng, std::uint8_t* mask_scratch) {
  const std::size_t n_out = out.size();
  if (p < 1.0) {
    for (std::size_t a = 0; a < n_out; ++a) mask_scratch[a] = rng.uniform01() < p ? 1 : 0;
  } else {
    std::fill(mask_scratch, mask_scratch + n_out, std::uint8_t{1});
  }
  double sq = 0.0;
  for (std::size_t a = 0; a < n_out; ++a) {
    double acc = 0.0;
    for (double x : in) acc += draw(rng) * x;
    const double value = mask_scratch[a] != 0 ? acc : 0.0;
    out[a] = value;
    sq += value * value;
  }
  return sq;
}

template <class Draw>
LogNormSample run_layers(const EnsembleConfig& config, const UnitVector& u, RngStream& rng, Draw& draw) {
  const auto widths = config.architecture.widths();
  const std::size_t max_width = *std::max_element(widths.begin(), widths.end());
  std::vector<double> current(u.coordinates().begin(), u.coordinates().end());
  std::vector<double> next(max_width);
  std::vector<std::uint8_t> mask(max_width);
  current.reserve(max_width);

  double log_norm = 0.0;
  for (std::size_t layer = 1; layer < widths.size(); ++layer) {
    std::span<double> out(next.data(), widths[layer]);
    const double raw = advance_layer(std::span<const double>(current), out, config.p, draw, rng, mask.data());
    if (raw == 0.0) return std::nullopt;
    log_norm += std::log(raw / (config.p * static_cast<double>(widths[layer])));
    const double inv = 1.0 / std::sqrt(raw);
    current.resize(widths[layer]);
    for (std::size_t a = 0; a < current.size(); ++a) current[a] = out[a] * inv;
  }
  return log_norm;
}

}  // namespace

LayerState propagate_layer(const LayerState& state, std::size_t layer, const EnsembleConfig& config,
                           RngStream& rng) {
  const Architecture& arch = config.architecture;
  if (state.zero) throw std::invalid_argument("propagate_layer: state already annihilated");
  if (layer < 1 || layer > arch.depth()) throw std::out_of_range("propagate_layer: layer out of range");
  if (state.direction.size() != arch.width(layer - 1)) {
    throw DimensionMismatch("propagate_layer: state dimension does not match n_{i-1}");
  }
  EntrySampler sampler(config.entry_law);
  std::vector<double> out(arch.width(layer));
  std::vector<std::uint8_t> mask(out.size());
  const double raw = advance_layer(std::span<const double>(state.direction), std::span<double>(out), config.p,
                                   sampler, rng, mask.data());
  LayerState next;
  next.layer = layer;
  if (raw == 0.0) {
    next.zero = true;
    next.log_norm = state.log_norm;
    next.direction = std::move(out);
    return next;
  }
  const double inv = 1.0 / std::sqrt(raw);
  for (double& x : out) x *= inv;
  next.direction = std::move(out);
  next.log_norm = state.log_norm + std::log(raw / (config.p * static_cast<double>(arch.width(layer))));
  return next;
}

LogNormSample sample_log_norm(const EnsembleConfig& config, const UnitVector& u, RngStream& rng) {
  if (u.dimension() != config.architecture.input_width()) {
    throw DimensionMismatch("u has dimension " + std::to_string(u.dimension()) + ", expected n_0");
  }
  // Dispatch on the law once so the inner loop is monomorphic.
  switch (config.entry_law.kind()) {
    case LawKind::StandardGaussian: {
      boost::random::normal_distribution<double> normal;
      auto draw = [&normal](RngStream& r) { return normal(r); };
      return run_layers(config, u, rng, draw);
    }
    case LawKind::Rademacher: {
      auto draw = [](RngStream& r) { return (r() >> 63) != 0 ? 1.0 : -1.0; };
      return run_layers(config, u, rng, draw);
    }
    default: {
      EntrySampler sampler(config.entry_law);
      return run_layers(config, u, rng, sampler);
    }
  }
}

LayerDraw draw_layer(std::size_t layer, const EnsembleConfig& config, RngStream& rng) {
  const Architecture& arch = config.architecture;
  if (layer < 1 || layer > arch.depth()) throw std::out_of_range("draw_layer: layer out of range");
  const std::size_t n_out = arch.width(layer);
  const std::size_t n_in = arch.width(layer - 1);
  LayerDraw result;
  result.mask.resize(n_out, 1);
  if (config.p < 1.0) {
    for (auto& bit : result.mask) bit = rng.uniform01() < config.p ? 1 : 0;
  }
  EntrySampler sampler(config.entry_law);
  result.weights.resize(n_out * n_in);
  sampler.fill(rng, result.weights);
  return result;
}

double predict_layer_variance(std::span<const double> u, std::size_t n_next, double p, double mu4) {
  double sq = 0.0;
  double quartic = 0.0;
  for (double x : u) {
    sq += x * x;
    quartic += x * x * x * x;
  }
  if (!(sq > 0.0)) throw std::invalid_argument("predict_layer_variance: u must be nonzero");
  const double n = static_cast<double>(n_next);
  return (3.0 / p - 1.0) / n + (mu4 - 3.0) / (p * n) * quartic / (sq * sq);
}

ZeroEventProbability zero_event_probability(const EnsembleConfig& config) {
  double survive = 1.0;
  double log_survive = 0.0;
  for (std::size_t n : config.architecture.layer_widths()) {
    const double closed = std::pow(1.0 - config.p, static_cast<double>(n));
    survive *= 1.0 - closed;
    log_survive += std::log1p(-closed);
  }
  const double value = 1.0 - survive;
  // 1 - survive cancels when every layer is almost surely open.
  return {value < 1e-8 ? -std::expm1(log_survive) : value, config.atomless()};
}

ErrorBudget error_budget(const EnsembleConfig& config, const UnitVector& u) {
  ErrorBudget budget;
  budget.beta = compute_beta(config, u);
  for (std::size_t n : config.architecture.layer_widths()) {
    const double width = static_cast<double>(n);
    budget.sum_inv_sq += 1.0 / (width * width);
    budget.mask_term += std::pow(1.0 - config.p, width);
  }
  const double beta = budget.beta.beta;
  if (beta > 0.0) {
    budget.beta_inv = budget.sum_inv_sq / beta;
    budget.fifth_root = std::pow(budget.sum_inv_sq / (beta * beta), 0.2);
    budget.half_power = std::sqrt(budget.sum_inv_sq / std::sqrt(beta));
  } else {
    const double inf = std::numeric_limits<double>::infinity();
    budget.beta_inv = budget.fifth_root = budget.half_power = inf;
  }
  return budget;
}

}  // namespace matprod
