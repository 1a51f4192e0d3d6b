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

// Exact normalized moments E[Z_d(u)^k], Z_d(u) = (n_0/n_d)|M u|^2.
//
// The path-sum representation writes the moment as an expectation over
// k-tuples of vertices V(0), ..., V(d): V(0) has i.i.d. entries drawn from
// (u_1^2, ..., u_{n_0}^2), each later V(i) is uniform on [n_i]^k, and the
// integrand is the product of layer factors C(V(i-1), V(i)).
//
// Three evaluators are provided:
//  * exact_moment: groups tuples by the set partition of positions they
//    induce (C depends on the pair of partitions only), so the cost is
//    d * Bell(k)^2 regardless of the widths.
//  * path_sum_moment: the same sum as a transfer product over the raw
//    tuples in [n_i]^k, for small instances.
//  * brute_force_moment: an oracle that does not use the path-sum reduction
//    at all; either the even 2k-path expansion of E|Mu|^{2k} or, for
//    discrete laws, a full enumeration of masks and weights.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "matprod/combinatorics.hpp"
#include "matprod/model.hpp"
#include "matprod/rational.hpp"

namespace matprod {

struct MomentOptions {
  double budget = 1e8;  // maximum estimated elementary operations
  int max_k = 8;
  bool exact = true;    // use rational arithmetic when every input is rational
};

struct MomentResult {
  double value = 0.0;
  std::optional<Rational> exact;  // set when computed in rational arithmetic
  double cost = 0.0;              // the estimate checked against the budget
  // binom(k, 2) < min_i n_i, the regime where the log-normal prediction holds.
  bool in_asymptotic_regime = true;
};

/// Throws BudgetExceeded when d * Bell(k)^2 exceeds options.budget and
/// std::invalid_argument for k < 1 or k > options.max_k.
MomentResult exact_moment(const EnsembleConfig& config, const UnitVector& u, int k,
                          const MomentOptions& options = {});

/// Cost model of exact_moment.
double exact_moment_cost(const EnsembleConfig& config, int k);

/// Transfer product over [n_i]^k; cost sum_i n_{i-1}^k n_i^k.
MomentResult path_sum_moment(const EnsembleConfig& config, const UnitVector& u, int k,
                             const MomentOptions& options = {});

enum class BruteForceMethod { Auto, EvenPaths, FullEnumeration };

/// Independent oracle. EvenPaths sums over 2k-tuples of paths whose edges are
/// all traversed an even number of times (cost sum_i n_{i-1}^{2k} n_i^{2k});
/// FullEnumeration enumerates every mask and weight assignment of a discrete
/// law (cost = number of states, capped at 2^24). Auto picks EvenPaths when
/// affordable, then FullEnumeration.
MomentResult brute_force_moment(const EnsembleConfig& config, const UnitVector& u, int k,
                                const MomentOptions& options = {},
                                BruteForceMethod method = BruteForceMethod::Auto);

/// exp(binom(k, 2) * beta).
double theory_moment(const BetaParams& beta, int k);

struct PathCount {
  BigInt enumerated;
  BigInt formula;
};

/// Counts ordered paths gamma in [n_0]^l x ... x [n_d]^l with edge sequence
/// `edges` (edges[i-1] over [n_{i-1}] x [n_i]) and gamma(d) = v_end, both by
/// enumeration and as prod_i c_l(m_{E(i)}).
///
/// Throws std::invalid_argument for incompatible edge sequences and
/// BudgetExceeded when prod_{i<d} n_i^l exceeds `budget`.
PathCount verify_path_count(std::span<const EdgeMultiplicity> edges, std::span<const std::size_t> v_end,
                            std::size_t ell, double budget = 1e7);

}  // namespace matprod
