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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "matprod/rational.hpp"

namespace matprod {

enum class LawKind { StandardGaussian, Rademacher, UniformSymmetric, DiscreteSymmetric };

struct Atom {
  double value = 0.0;
  double probability = 0.0;
};

/// A symmetric, mean-0, variance-1 law for the entries of the weight
/// matrices. Moments are available both as doubles and, when the law has
/// rational moments, as exact rationals.
///
/// UniformSymmetric is supported on [-sqrt(3), sqrt(3)], so mu_2 = 1 and
/// mu_4 = 9/5. DiscreteSymmetric atoms are merged by value on construction.
class DistributionSpec {
 public:
  static DistributionSpec gaussian();
  static DistributionSpec rademacher();
  static DistributionSpec uniform_symmetric();
  static DistributionSpec discrete(std::vector<Atom> atoms);

  LawKind kind() const noexcept { return kind_; }
  std::span<const Atom> atoms() const noexcept { return atoms_; }

  // False for laws with point masses (Rademacher, DiscreteSymmetric).
  bool atomless() const noexcept;

  double moment(int k) const;
  double fourth_moment() const { return moment(4); }

  /// Exact k-th moment; nullopt when the law's moments are not rational
  /// (never the case for the built-in kinds). Discrete laws use the exact
  /// binary value of their double-valued atoms.
  std::optional<Rational> exact_moment(int k) const;

  std::string name() const;

 private:
  explicit DistributionSpec(LawKind kind, std::vector<Atom> atoms = {})
      : kind_(kind), atoms_(std::move(atoms)) {}

  LawKind kind_;
  std::vector<Atom> atoms_;
};

/// Checks mean 0, symmetry about 0 and unit variance. Returns the law
/// unchanged on success.
///
/// Throws NormalizationError when mu_1 != 0, mu_2 != 1 or the probabilities
/// do not sum to 1; AsymmetryError when a discrete value set is not mirrored
/// with matching probabilities.
DistributionSpec validate_distribution(DistributionSpec law);

/// Parses "gaussian", "rademacher", "uniform" or
/// "discrete:v1:p1,v2:p2,..." (the CLI spelling).
DistributionSpec parse_distribution(const std::string& text);

}  // namespace matprod
