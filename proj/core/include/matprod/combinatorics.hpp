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

// Path-counting primitives: edge multiplicities of a bipartite layer,
// vertex tuples, the multinomial count c_l, the moment weight wt and the
// per-layer factor C of the path-sum moment formula.
//
// Vertices are 0-based throughout.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "matprod/distribution.hpp"
#include "matprod/rational.hpp"

namespace matprod {

/// Dense m(a, b) over [rows] x [cols] with cached row and column sums.
class EdgeMultiplicity {
 public:
  EdgeMultiplicity(std::size_t rows, std::size_t cols);
  EdgeMultiplicity(std::size_t rows, std::size_t cols, std::vector<unsigned> counts);

  /// m_{x,y}: one edge (x_j, y_j) per position j.
  static EdgeMultiplicity from_tuples(std::span<const std::size_t> left, std::span<const std::size_t> right,
                                      std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  unsigned operator()(std::size_t a, std::size_t b) const { return counts_[a * cols_ + b]; }
  unsigned row_sum(std::size_t a) const { return row_sums_[a]; }  // m(a, *)
  unsigned col_sum(std::size_t b) const { return col_sums_[b]; }  // m(*, b)
  unsigned total() const noexcept { return total_; }
  std::span<const unsigned> counts() const noexcept { return counts_; }

  void add(std::size_t a, std::size_t b, unsigned count = 1);
  EdgeMultiplicity doubled() const;
  bool even() const noexcept;

  bool operator==(const EdgeMultiplicity& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && counts_ == other.counts_;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<unsigned> counts_;
  std::vector<unsigned> row_sums_;
  std::vector<unsigned> col_sums_;
  unsigned total_ = 0;
};

/// (sum parts)! / prod(parts!)
BigInt multinomial(std::span<const unsigned> parts);

/// c_l(m): number of left-endpoint tuples x in [n]^l with m_{x,y} = m for a
/// fixed right-endpoint tuple y. Computed as the product over columns b of
/// multinomial(m(*, b); m(1, b), ..., m(n, b)).
///
/// Throws std::invalid_argument when the multiplicities do not sum to l.
BigInt multiplicity_count(const EdgeMultiplicity& m, std::size_t ell);

/// wt(m) = prod over entries of mu_{m(a,b)}; 0 when any entry is odd.
double edge_weight(const EdgeMultiplicity& m, const DistributionSpec& law);
std::optional<Rational> exact_edge_weight(const EdgeMultiplicity& m, const DistributionSpec& law);

enum class TupleClass {
  Unique,   // all entries distinct
  OnePair,  // exactly one coincident pair of positions
  Other,
};

class VertexTuple {
 public:
  /// Every entry must lie in [0, range).
  VertexTuple(std::vector<std::size_t> entries, std::size_t range);

  std::span<const std::size_t> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t range() const noexcept { return range_; }
  std::size_t operator[](std::size_t j) const { return entries_[j]; }

  std::size_t unique_count() const noexcept { return unique_; }
  TupleClass classification() const noexcept { return class_; }
  /// Positions (a, b), a < b, of the coincident pair; meaningful for OnePair.
  std::pair<std::size_t, std::size_t> pair() const noexcept { return pair_; }

 private:
  std::vector<std::size_t> entries_;
  std::size_t range_;
  std::size_t unique_ = 0;
  TupleClass class_ = TupleClass::Unique;
  std::pair<std::size_t, std::size_t> pair_{0, 0};
};

/// C(V_prev, V_next) = wt(2m) c_{2k}(2m) / c_k(m) p^{#V_next - k},
/// m = m_{V_prev, V_next}.
double layer_factor(const VertexTuple& prev, const VertexTuple& next, const DistributionSpec& law, double p);
std::optional<Rational> exact_layer_factor(const VertexTuple& prev, const VertexTuple& next,
                                           const DistributionSpec& law, const Rational& p);

/// All set partitions of {0, ..., k-1} as restricted growth strings:
/// label[0] = 0 and label[j] <= 1 + max(label[0..j-1]).
std::vector<std::vector<std::uint8_t>> set_partitions(std::size_t k);

/// Bell number B_k.
std::uint64_t bell_number(std::size_t k);

}  // namespace matprod
