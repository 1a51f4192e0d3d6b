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

#include "matprod/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace matprod {

EdgeMultiplicity::EdgeMultiplicity(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), counts_(rows * cols, 0), row_sums_(rows, 0), col_sums_(cols, 0) {}

EdgeMultiplicity::EdgeMultiplicity(std::size_t rows, std::size_t cols, std::vector<unsigned> counts)
    : EdgeMultiplicity(rows, cols) {
  if (counts.size() != rows * cols) throw std::invalid_argument("EdgeMultiplicity: counts size != rows * cols");
  for (std::size_t a = 0; a < rows; ++a) {
    for (std::size_t b = 0; b < cols; ++b) add(a, b, counts[a * cols + b]);
  }
}

EdgeMultiplicity EdgeMultiplicity::from_tuples(std::span<const std::size_t> left,
                                               std::span<const std::size_t> right, std::size_t rows,
                                               std::size_t cols) {
  if (left.size() != right.size()) throw std::invalid_argument("from_tuples: tuple lengths differ");
  EdgeMultiplicity m(rows, cols);
  for (std::size_t j = 0; j < left.size(); ++j) m.add(left[j], right[j]);
  return m;
}

void EdgeMultiplicity::add(std::size_t a, std::size_t b, unsigned count) {
  if (a >= rows_ || b >= cols_) throw std::out_of_range("EdgeMultiplicity: vertex out of range");
  counts_[a * cols_ + b] += count;
  row_sums_[a] += count;
  col_sums_[b] += count;
  total_ += count;
}

EdgeMultiplicity EdgeMultiplicity::doubled() const {
  EdgeMultiplicity out(*this);
  for (auto& c : out.counts_) c *= 2;
  for (auto& c : out.row_sums_) c *= 2;
  for (auto& c : out.col_sums_) c *= 2;
  out.total_ *= 2;
  return out;
}

bool EdgeMultiplicity::even() const noexcept {
  return std::all_of(counts_.begin(), counts_.end(), [](unsigned c) { return c % 2 == 0; });
}

BigInt multinomial(std::span<const unsigned> parts) {
  // Build the coefficient as a product of binomials to keep intermediates small.
  BigInt result = 1;
  unsigned running = 0;
  for (unsigned part : parts) {
    for (unsigned j = 1; j <= part; ++j) {
      ++running;
      result *= running;
      result /= j;
    }
  }
  return result;
}

BigInt multiplicity_count(const EdgeMultiplicity& m, std::size_t ell) {
  if (m.total() != ell) {
    throw std::invalid_argument("multiplicity_count: multiplicities sum to " + std::to_string(m.total()) +
                                ", expected " + std::to_string(ell));
  }
  BigInt result = 1;
  std::vector<unsigned> column(m.rows());
  for (std::size_t b = 0; b < m.cols(); ++b) {
    for (std::size_t a = 0; a < m.rows(); ++a) column[a] = m(a, b);
    result *= multinomial(column);
  }
  return result;
}

double edge_weight(const EdgeMultiplicity& m, const DistributionSpec& law) {
  double weight = 1.0;
  for (unsigned c : m.counts()) {
    if (c % 2 != 0) return 0.0;
    if (c > 0) weight *= law.moment(static_cast<int>(c));
  }
  return weight;
}

std::optional<Rational> exact_edge_weight(const EdgeMultiplicity& m, const DistributionSpec& law) {
  Rational weight = 1;
  for (unsigned c : m.counts()) {
    if (c % 2 != 0) return Rational(0);
    if (c == 0) continue;
    auto mu = law.exact_moment(static_cast<int>(c));
    if (!mu) return std::nullopt;
    weight *= *mu;
  }
  return weight;
}

VertexTuple::VertexTuple(std::vector<std::size_t> entries, std::size_t range)
    : entries_(std::move(entries)), range_(range) {
  for (std::size_t v : entries_) {
    if (v >= range_) throw std::out_of_range("VertexTuple: entry outside [0, range)");
  }
  std::vector<std::size_t> sorted(entries_);
  std::sort(sorted.begin(), sorted.end());
  unique_ = static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());

  std::size_t coincident_pairs = 0;
  for (std::size_t a = 0; a < entries_.size(); ++a) {
    for (std::size_t b = a + 1; b < entries_.size(); ++b) {
      if (entries_[a] == entries_[b]) {
        if (coincident_pairs == 0) pair_ = {a, b};
        ++coincident_pairs;
      }
    }
  }
  class_ = coincident_pairs == 0 ? TupleClass::Unique
           : coincident_pairs == 1 ? TupleClass::OnePair
                                   : TupleClass::Other;
}

namespace {

struct FactorParts {
  EdgeMultiplicity doubled;
  BigInt numerator;    // c_{2k}(2m)
  BigInt denominator;  // c_k(m)
  int p_exponent;      // #V_next - k
};

FactorParts factor_parts(const VertexTuple& prev, const VertexTuple& next) {
  if (prev.size() != next.size()) throw std::invalid_argument("layer_factor: tuple lengths differ");
  const std::size_t k = prev.size();
  auto m = EdgeMultiplicity::from_tuples(prev.entries(), next.entries(), prev.range(), next.range());
  auto m2 = m.doubled();
  BigInt numerator = multiplicity_count(m2, 2 * k);
  BigInt denominator = multiplicity_count(m, k);
  return {std::move(m2), std::move(numerator), std::move(denominator),
          static_cast<int>(next.unique_count()) - static_cast<int>(k)};
}

}  // namespace

double layer_factor(const VertexTuple& prev, const VertexTuple& next, const DistributionSpec& law, double p) {
  const FactorParts parts = factor_parts(prev, next);
  const double ratio = to_double(Rational(parts.numerator, parts.denominator));
  return edge_weight(parts.doubled, law) * ratio * std::pow(p, parts.p_exponent);
}

std::optional<Rational> exact_layer_factor(const VertexTuple& prev, const VertexTuple& next,
                                           const DistributionSpec& law, const Rational& p) {
  const FactorParts parts = factor_parts(prev, next);
  auto weight = exact_edge_weight(parts.doubled, law);
  if (!weight) return std::nullopt;
  Rational result = *weight * Rational(parts.numerator, parts.denominator);
  // p^{#V - k} with #V <= k, so the exponent is never positive.
  for (int j = 0; j < -parts.p_exponent; ++j) result /= p;
  return result;
}

std::vector<std::vector<std::uint8_t>> set_partitions(std::size_t k) {
  std::vector<std::vector<std::uint8_t>> out;
  if (k == 0) {
    out.emplace_back();
    return out;
  }
  std::vector<std::uint8_t> label(k, 0);
  std::vector<std::uint8_t> prefix_max(k, 0);  // max of label[0..j]
  while (true) {
    out.push_back(label);
    // Increment the rightmost position that can grow, reset the tail.
    std::size_t j = k - 1;
    while (j > 0 && label[j] > prefix_max[j - 1]) --j;
    if (j == 0) break;
    ++label[j];
    prefix_max[j] = std::max(prefix_max[j - 1], label[j]);
    for (std::size_t t = j + 1; t < k; ++t) {
      label[t] = 0;
      prefix_max[t] = prefix_max[j];
    }
  }
  return out;
}

std::uint64_t bell_number(std::size_t k) {
  // Bell triangle.
  std::vector<std::uint64_t> row{1};
  for (std::size_t n = 0; n < k; ++n) {
    std::vector<std::uint64_t> next{row.back()};
    for (std::uint64_t value : row) next.push_back(next.back() + value);
    row = std::move(next);
  }
  return row.front();
}

}  // namespace matprod
