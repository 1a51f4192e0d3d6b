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

// Oracles for E[Z_d^k] that never touch the layer factor C.
//
// EvenPaths expands |Mu|^{2k} into 2k-tuples of paths gamma through the
// layers. Taking expectations layer by layer gives
//   E|Mu|^{2k} = sum_gamma prod_j u_{gamma_j(0)}
//                * prod_i wt(m_{gamma(i-1), gamma(i)}) p^{#gamma(i)} (p n_{i-1})^{-k},
// where gamma(d) pairs positions (2j, 2j+1). The sum is a transfer product
// over 2k-tuples.
//
// FullEnumeration walks every mask and weight assignment of a finitely
// supported law and averages Z^k directly.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <type_traits>
#include <vector>

#include "matprod/errors.hpp"
#include "matprod/path_moments.hpp"
#include "moment_inputs.hpp"

namespace matprod {

namespace {

constexpr double kEnumerationCap = 16777216.0;  // 2^24

template <class T>
T int_power(const T& base, int exponent) {
  T out(1);
  if (exponent >= 0) {
    for (int j = 0; j < exponent; ++j) out *= base;
  } else {
    for (int j = 0; j < -exponent; ++j) out /= base;
  }
  return out;
}

void decode(std::size_t index, std::size_t n, std::vector<std::size_t>& out) {
  for (auto& digit : out) {
    digit = index % n;
    index /= n;
  }
}

std::size_t tuple_count(std::size_t n, std::size_t length) {
  std::size_t out = 1;
  for (std::size_t j = 0; j < length; ++j) out *= n;
  return out;
}

double even_paths_cost(const EnsembleConfig& config, int k) {
  const auto widths = config.architecture.widths();
  double cost = 0.0;
  for (std::size_t i = 1; i < widths.size(); ++i) {
    const double right = i + 1 == widths.size() ? std::pow(static_cast<double>(widths[i]), k)
                                                : std::pow(static_cast<double>(widths[i]), 2 * k);
    cost += std::pow(static_cast<double>(widths[i - 1]), 2 * k) * right;
  }
  return cost;
}

// prod_j u_{x_j}. In rational mode only u_a^2 is known exactly; a tuple with
// an odd count at some vertex contributes nothing after the next layer's
// parity constraint, so it is dropped here.
template <class T>
T initial_weight(const std::vector<std::size_t>& x, const UnitVector& u, const detail::ScalarInputs<T>& in,
                 std::vector<unsigned>& counts) {
  if constexpr (std::is_same_v<T, Rational>) {
    counts.assign(u.dimension(), 0);
    for (auto a : x) ++counts[a];
    T w(1);
    for (std::size_t a = 0; a < counts.size(); ++a) {
      if (counts[a] % 2 != 0) return T(0);
      w *= int_power(in.u_square[a], static_cast<int>(counts[a] / 2));
    }
    return w;
  } else {
    (void)in;
    (void)counts;
    T w(1);
    for (auto a : x) w *= u[a];
    return w;
  }
}

template <class T>
T even_paths(const EnsembleConfig& config, const UnitVector& u, int k, const detail::ScalarInputs<T>& in) {
  const auto widths = config.architecture.widths();
  const std::size_t len = 2 * static_cast<std::size_t>(k);
  std::vector<std::size_t> x(len), y(len), keys(len);
  std::vector<unsigned> counts;

  std::size_t states = tuple_count(widths[0], len);
  std::vector<T> weight(states);
  for (std::size_t s = 0; s < states; ++s) {
    decode(s, widths[0], x);
    weight[s] = initial_weight(x, u, in, counts);
  }

  const std::size_t depth = widths.size() - 1;
  for (std::size_t i = 1; i <= depth; ++i) {
    const std::size_t n_prev = widths[i - 1];
    const std::size_t n = widths[i];
    const bool last = i == depth;
    // The last layer closes the paths in pairs: only tuples (b1,b1,b2,b2,...).
    const std::size_t next_states = last ? tuple_count(n, len / 2) : tuple_count(n, len);
    std::vector<T> next(next_states, T(0));
    std::vector<std::size_t> half(len / 2);
    for (std::size_t t = 0; t < next_states; ++t) {
      if (last) {
        decode(t, n, half);
        for (std::size_t j = 0; j < half.size(); ++j) y[2 * j] = y[2 * j + 1] = half[j];
      } else {
        decode(t, n, y);
      }
      std::vector<std::size_t> distinct(y);
      std::sort(distinct.begin(), distinct.end());
      const auto open = std::unique(distinct.begin(), distinct.end()) - distinct.begin();
      const T mask_factor = int_power(in.p, static_cast<int>(open) - k);

      T acc(0);
      for (std::size_t s = 0; s < states; ++s) {
        if (weight[s] == T(0)) continue;
        decode(s, n_prev, x);
        for (std::size_t j = 0; j < len; ++j) keys[j] = x[j] * n + y[j];
        std::sort(keys.begin(), keys.end());
        T wt(1);
        std::size_t run = 1;
        for (std::size_t j = 1; j <= len; ++j) {
          if (j < len && keys[j] == keys[j - 1]) {
            ++run;
            continue;
          }
          wt *= in.mu[run];
          run = 1;
        }
        if (wt == T(0)) continue;
        acc += weight[s] * wt;
      }
      T scale(mask_factor);
      for (int j = 0; j < k; ++j) scale /= T(static_cast<long long>(n));
      next[t] = acc * scale;
    }
    weight = std::move(next);
    states = next_states;
  }
  T total(0);
  for (const T& w : weight) total += w;
  return total;
}

double full_enumeration_states(const EnsembleConfig& config) {
  const auto widths = config.architecture.widths();
  const double atoms = static_cast<double>(config.entry_law.atoms().size());
  const bool masked = config.p < 1.0;
  double states = 1.0;
  for (std::size_t i = 1; i < widths.size(); ++i) {
    // Closed rows carry no weights, so each row has 1 + atoms^{n_{i-1}} outcomes.
    const double per_row = std::pow(atoms, static_cast<double>(widths[i - 1])) + (masked ? 1.0 : 0.0);
    states *= std::pow(per_row, static_cast<double>(widths[i]));
  }
  return states;
}

template <class T>
struct Enumerator {
  const EnsembleConfig& config;
  int k;
  std::vector<T> values;
  std::vector<T> probabilities;
  T p;
  T one_minus_p;
  bool masked;
  std::vector<T> u_products;  // n_0 x n_0
  T total{0};

  // rows: the product P = D_i W_i ... D_1 W_1 as an n_{i-1} x n_0 matrix.
  void layer(std::size_t i, const std::vector<T>& rows, const T& weight) {
    const auto widths = config.architecture.widths();
    const std::size_t n0 = widths[0];
    if (i == widths.size()) {
      T norm(0);
      for (std::size_t b = 0; b < rows.size() / n0; ++b) {
        const T* row = rows.data() + b * n0;
        for (std::size_t a = 0; a < n0; ++a) {
          if (row[a] == T(0)) continue;
          for (std::size_t c = 0; c < n0; ++c) norm += row[a] * row[c] * u_products[a * n0 + c];
        }
      }
      T z = norm * T(static_cast<long long>(n0)) / T(static_cast<long long>(widths.back()));
      for (std::size_t j = 1; j < widths.size(); ++j) z /= p * T(static_cast<long long>(widths[j - 1]));
      total += weight * int_power(z, k);
      return;
    }
    const std::size_t n_prev = widths[i - 1];
    const std::size_t n = widths[i];
    std::vector<T> next(n * n0, T(0));
    row(i, 0, rows, next, weight, n_prev, n);
  }

  // Chooses the outcome of row r of layer i, then recurses to r + 1.
  void row(std::size_t i, std::size_t r, const std::vector<T>& rows, std::vector<T>& next, const T& weight,
           std::size_t n_prev, std::size_t n) {
    if (r == n) {
      layer(i + 1, next, weight);
      return;
    }
    const std::size_t n0 = config.architecture.input_width();
    if (masked) {
      std::fill(next.begin() + static_cast<std::ptrdiff_t>(r * n0),
                next.begin() + static_cast<std::ptrdiff_t>((r + 1) * n0), T(0));
      row(i, r + 1, rows, next, weight * one_minus_p, n_prev, n);
    }
    const T open_weight = masked ? weight * p : weight;
    const std::size_t assignments = tuple_count(values.size(), n_prev);
    std::vector<std::size_t> choice(n_prev);
    for (std::size_t index = 0; index < assignments; ++index) {
      decode(index, values.size(), choice);
      T w = open_weight;
      for (std::size_t c = 0; c < n_prev; ++c) w *= probabilities[choice[c]];
      for (std::size_t a = 0; a < n0; ++a) {
        T s(0);
        for (std::size_t c = 0; c < n_prev; ++c) s += values[choice[c]] * rows[c * n0 + a];
        next[r * n0 + a] = s;
      }
      row(i, r + 1, rows, next, w, n_prev, n);
    }
  }
};

template <class T>
T full_enumeration(const EnsembleConfig& config, const UnitVector& u, int k) {
  Enumerator<T> e{config, k, {}, {}, T(0), T(0), config.p < 1.0, {}, T(0)};
  for (const auto& atom : config.entry_law.atoms()) {
    if constexpr (std::is_same_v<T, Rational>) {
      e.values.push_back(to_rational(atom.value));
      e.probabilities.push_back(to_rational(atom.probability));
    } else {
      e.values.push_back(atom.value);
      e.probabilities.push_back(atom.probability);
    }
  }
  if constexpr (std::is_same_v<T, Rational>) {
    e.p = to_rational(config.p);
  } else {
    e.p = config.p;
  }
  e.one_minus_p = T(1) - e.p;
  const std::size_t n0 = u.dimension();
  e.u_products.resize(n0 * n0);
  for (std::size_t a = 0; a < n0; ++a) {
    for (std::size_t b = 0; b < n0; ++b) {
      if constexpr (std::is_same_v<T, Rational>) {
        e.u_products[a * n0 + b] = *u.exact_product(a, b);
      } else {
        e.u_products[a * n0 + b] = u[a] * u[b];
      }
    }
  }
  std::vector<T> identity(n0 * n0, T(0));
  for (std::size_t a = 0; a < n0; ++a) identity[a * n0 + a] = T(1);
  e.layer(1, identity, T(1));
  return e.total;
}

}  // namespace

MomentResult brute_force_moment(const EnsembleConfig& config, const UnitVector& u, int k,
                                const MomentOptions& options, BruteForceMethod method) {
  detail::check_order(k, options);
  detail::check_dimension(config, u);

  const double path_cost = even_paths_cost(config, k);
  const bool discrete = !config.entry_law.atoms().empty();
  const double states = discrete ? full_enumeration_states(config) : INFINITY;

  if (method == BruteForceMethod::Auto) {
    if (path_cost <= options.budget) {
      method = BruteForceMethod::EvenPaths;
    } else if (discrete && states <= kEnumerationCap) {
      method = BruteForceMethod::FullEnumeration;
    } else {
      throw BudgetExceeded("brute_force_moment", path_cost, options.budget);
    }
  }

  MomentResult result;
  result.in_asymptotic_regime = detail::in_asymptotic_regime(config, k);
  if (method == BruteForceMethod::EvenPaths) {
    if (path_cost > options.budget) throw BudgetExceeded("brute_force_moment (even paths)", path_cost, options.budget);
    result.cost = path_cost;
    if (options.exact) {
      if (auto in = detail::rational_inputs(config, u, 2 * k)) {
        Rational value = even_paths(config, u, k, *in);
        result.value = to_double(value);
        result.exact = std::move(value);
        return result;
      }
    }
    result.value = even_paths(config, u, k, detail::double_inputs(config, u, 2 * k));
    return result;
  }

  if (!discrete) throw std::invalid_argument("brute_force_moment: full enumeration needs a finitely supported law");
  if (states > kEnumerationCap) throw BudgetExceeded("brute_force_moment (full enumeration)", states, kEnumerationCap);
  result.cost = states;
  if (options.exact && u.has_exact_products()) {
    Rational value = full_enumeration<Rational>(config, u, k);
    result.value = to_double(value);
    result.exact = std::move(value);
    return result;
  }
  result.value = full_enumeration<double>(config, u, k);
  return result;
}

}  // namespace matprod
