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

#include "matprod/path_moments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <type_traits>

#include "moment_inputs.hpp"

namespace matprod {

namespace {

using detail::ScalarInputs;

template <class T>
T factor_of(const VertexTuple& prev, const VertexTuple& next, const DistributionSpec& law, const T& p) {
  if constexpr (std::is_same_v<T, Rational>) {
    auto value = exact_layer_factor(prev, next, law, p);
    if (!value) throw std::logic_error("layer factor requested in rational mode for a non-rational law");
    return *value;
  } else {
    return layer_factor(prev, next, law, p);
  }
}

std::vector<std::size_t> widen(const std::vector<std::uint8_t>& labels) {
  return std::vector<std::size_t>(labels.begin(), labels.end());
}

std::size_t block_count(const std::vector<std::uint8_t>& labels) {
  return labels.empty() ? 0 : static_cast<std::size_t>(*std::max_element(labels.begin(), labels.end())) + 1;
}

// Probability that k i.i.d. draws from u^2 induce exactly the partition with
// the given block sizes, by Moebius inversion over the partition lattice:
//   P(pi) = sum_{rho >= pi} mu(pi, rho) prod_{C in rho} S_{|C|},
// where S_r = sum_a u_a^{2r} and mu(pi, rho) = prod_C (-1)^{b_C - 1} (b_C - 1)!.
template <class T>
T initial_partition_probability(const std::vector<std::size_t>& block_sizes, const std::vector<T>& power_sums,
                                std::map<std::size_t, std::vector<std::vector<std::uint8_t>>>& lattice_cache) {
  const std::size_t b = block_sizes.size();
  auto& coarsenings = lattice_cache[b];
  if (coarsenings.empty()) coarsenings = set_partitions(b);

  T total(0);
  std::vector<std::size_t> merged_size;
  std::vector<std::size_t> merged_count;
  for (const auto& rho : coarsenings) {
    const std::size_t groups = block_count(rho);
    merged_size.assign(groups, 0);
    merged_count.assign(groups, 0);
    for (std::size_t j = 0; j < b; ++j) {
      merged_size[rho[j]] += block_sizes[j];
      ++merged_count[rho[j]];
    }
    long long coefficient = 1;
    T product(1);
    for (std::size_t g = 0; g < groups; ++g) {
      for (std::size_t t = 1; t < merged_count[g]; ++t) coefficient *= -static_cast<long long>(t);
      product *= power_sums[merged_size[g]];
    }
    total += T(coefficient) * product;
  }
  return total;
}

template <class T>
T partition_chain_moment(const EnsembleConfig& config, int k, const ScalarInputs<T>& in) {
  const auto partitions = set_partitions(static_cast<std::size_t>(k));
  const std::size_t count = partitions.size();
  const auto ku = static_cast<std::size_t>(k);

  std::vector<T> factor(count * count);
  for (std::size_t a = 0; a < count; ++a) {
    const VertexTuple prev(widen(partitions[a]), ku);
    for (std::size_t b = 0; b < count; ++b) {
      const VertexTuple next(widen(partitions[b]), ku);
      factor[a * count + b] = factor_of<T>(prev, next, config.entry_law, in.p);
    }
  }

  std::vector<T> power_sums(ku + 1, T(0));
  for (const T& sq : in.u_square) {
    T power(1);
    for (std::size_t r = 0; r <= ku; ++r) {
      power_sums[r] += power;
      power *= sq;
    }
  }

  std::map<std::size_t, std::vector<std::vector<std::uint8_t>>> lattice_cache;
  std::vector<T> weight(count);
  for (std::size_t a = 0; a < count; ++a) {
    std::vector<std::size_t> sizes(block_count(partitions[a]), 0);
    for (auto label : partitions[a]) ++sizes[label];
    weight[a] = initial_partition_probability(sizes, power_sums, lattice_cache);
  }

  const auto widths = config.architecture.widths();
  std::vector<T> next(count);
  for (std::size_t layer = 1; layer < widths.size(); ++layer) {
    const auto n = static_cast<long long>(widths[layer]);
    for (std::size_t b = 0; b < count; ++b) {
      const auto blocks = static_cast<long long>(block_count(partitions[b]));
      if (blocks > n) {
        next[b] = T(0);
        continue;
      }
      // P(uniform V in [n]^k induces partition b) = n (n-1) ... (n-blocks+1) / n^k.
      T probability(1);
      for (long long j = 0; j < blocks; ++j) probability *= T(n - j);
      for (int j = 0; j < k; ++j) probability /= T(n);
      T acc(0);
      for (std::size_t a = 0; a < count; ++a) acc += weight[a] * factor[a * count + b];
      next[b] = acc * probability;
    }
    std::swap(weight, next);
  }
  T total(0);
  for (const T& w : weight) total += w;
  return total;
}

// Index <-> tuple in [n]^k, little-endian base n.
void decode(std::size_t index, std::size_t n, std::vector<std::size_t>& out) {
  for (auto& digit : out) {
    digit = index % n;
    index /= n;
  }
}

std::size_t int_pow(std::size_t base, std::size_t exponent) {
  std::size_t out = 1;
  for (std::size_t j = 0; j < exponent; ++j) out *= base;
  return out;
}

template <class T>
T tuple_transfer_moment(const EnsembleConfig& config, int k, const ScalarInputs<T>& in) {
  const auto widths = config.architecture.widths();
  const auto ku = static_cast<std::size_t>(k);
  std::vector<std::size_t> tuple(ku);

  std::size_t states = int_pow(widths[0], ku);
  std::vector<T> weight(states);
  for (std::size_t v = 0; v < states; ++v) {
    decode(v, widths[0], tuple);
    T w(1);
    for (std::size_t entry : tuple) w *= in.u_square[entry];
    weight[v] = w;
  }

  std::vector<std::size_t> other(ku);
  for (std::size_t layer = 1; layer < widths.size(); ++layer) {
    const std::size_t n_prev = widths[layer - 1];
    const std::size_t n = widths[layer];
    const std::size_t next_states = int_pow(n, ku);
    std::vector<T> next(next_states, T(0));
    for (std::size_t v = 0; v < states; ++v) {
      if (weight[v] == T(0)) continue;
      decode(v, n_prev, tuple);
      const VertexTuple prev(tuple, n_prev);
      for (std::size_t w = 0; w < next_states; ++w) {
        decode(w, n, other);
        next[w] += weight[v] * factor_of<T>(prev, VertexTuple(other, n), config.entry_law, in.p);
      }
    }
    T scale(1);
    for (std::size_t j = 0; j < ku; ++j) scale /= T(static_cast<long long>(n));
    for (auto& x : next) x *= scale;
    weight = std::move(next);
    states = next_states;
  }
  T total(0);
  for (const T& w : weight) total += w;
  return total;
}

template <class Evaluate>
MomentResult dispatch(const EnsembleConfig& config, const UnitVector& u, int k, const MomentOptions& options,
                      double cost, Evaluate&& evaluate) {
  MomentResult result;
  result.cost = cost;
  result.in_asymptotic_regime = detail::in_asymptotic_regime(config, k);
  if (options.exact) {
    if (auto exact_in = detail::rational_inputs(config, u, 4 * k)) {
      Rational value = evaluate(*exact_in);
      result.value = to_double(value);
      result.exact = std::move(value);
      return result;
    }
  }
  result.value = evaluate(detail::double_inputs(config, u, 4 * k));
  return result;
}

}  // namespace

double exact_moment_cost(const EnsembleConfig& config, int k) {
  const double bell = static_cast<double>(bell_number(static_cast<std::size_t>(k)));
  const double depth = static_cast<double>(config.architecture.depth());
  // Factor table (k^2 work per entry) plus one Bell x Bell contraction per layer.
  return bell * bell * (static_cast<double>(k * k) + depth);
}

MomentResult exact_moment(const EnsembleConfig& config, const UnitVector& u, int k, const MomentOptions& options) {
  detail::check_order(k, options);
  detail::check_dimension(config, u);
  const double cost = exact_moment_cost(config, k);
  if (cost > options.budget) throw BudgetExceeded("exact_moment", cost, options.budget);
  return dispatch(config, u, k, options, cost,
                  [&](const auto& in) { return partition_chain_moment(config, k, in); });
}

MomentResult path_sum_moment(const EnsembleConfig& config, const UnitVector& u, int k,
                             const MomentOptions& options) {
  detail::check_order(k, options);
  detail::check_dimension(config, u);
  const auto widths = config.architecture.widths();
  double cost = 0.0;
  for (std::size_t i = 1; i < widths.size(); ++i) {
    cost += detail::power_cost(static_cast<double>(widths[i - 1] * widths[i]), k) * k * k;
  }
  if (cost > options.budget) throw BudgetExceeded("path_sum_moment", cost, options.budget);
  return dispatch(config, u, k, options, cost, [&](const auto& in) { return tuple_transfer_moment(config, k, in); });
}

double theory_moment(const BetaParams& beta, int k) {
  if (k < 1) throw std::invalid_argument("moment order k must be >= 1");
  const double pairs = 0.5 * k * (k - 1);
  return std::exp(pairs * beta.beta);
}

PathCount verify_path_count(std::span<const EdgeMultiplicity> edges, std::span<const std::size_t> v_end,
                            std::size_t ell, double budget) {
  if (edges.empty()) throw std::invalid_argument("verify_path_count: need at least one layer");
  if (v_end.size() != ell) throw std::invalid_argument("verify_path_count: endpoint tuple length != l");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].total() != ell) throw std::invalid_argument("verify_path_count: layer multiplicities != l");
    if (i + 1 < edges.size()) {
      if (edges[i].cols() != edges[i + 1].rows()) throw std::invalid_argument("verify_path_count: width mismatch");
      for (std::size_t b = 0; b < edges[i].cols(); ++b) {
        if (edges[i].col_sum(b) != edges[i + 1].row_sum(b)) {
          throw std::invalid_argument("verify_path_count: right endpoints of a layer differ from the next left endpoints");
        }
      }
    }
  }
  const EdgeMultiplicity& last = edges.back();
  std::vector<unsigned> end_counts(last.cols(), 0);
  for (std::size_t v : v_end) {
    if (v >= last.cols()) throw std::out_of_range("verify_path_count: endpoint outside [n_d]");
    ++end_counts[v];
  }
  for (std::size_t b = 0; b < last.cols(); ++b) {
    if (end_counts[b] != last.col_sum(b)) {
      throw std::invalid_argument("verify_path_count: endpoint tuple does not match the last layer");
    }
  }

  double cost = 0.0;
  for (const auto& m : edges) cost += detail::power_cost(static_cast<double>(m.rows()), static_cast<double>(ell));
  if (cost > budget) throw BudgetExceeded("verify_path_count", cost, budget);

  PathCount count;
  count.formula = 1;
  for (const auto& m : edges) count.formula *= multiplicity_count(m, ell);

  // Walk backwards from gamma(d) = v_end, enumerating every left tuple whose
  // edge multiplicity against the current right tuple matches the layer.
  std::vector<std::size_t> right(v_end.begin(), v_end.end());
  auto recurse = [&](auto& self, std::size_t layer, const std::vector<std::size_t>& y) -> void {
    if (layer == 0) {
      ++count.enumerated;
      return;
    }
    const EdgeMultiplicity& target = edges[layer - 1];
    const std::size_t n = target.rows();
    const std::size_t states = int_pow(n, ell);
    std::vector<std::size_t> x(ell);
    for (std::size_t index = 0; index < states; ++index) {
      decode(index, n, x);
      if (EdgeMultiplicity::from_tuples(x, y, n, target.cols()) == target) self(self, layer - 1, x);
    }
  };
  recurse(recurse, edges.size(), right);
  return count;
}

}  // namespace matprod
