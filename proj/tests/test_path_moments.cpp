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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "matprod/errors.hpp"
#include "matprod/path_moments.hpp"

namespace matprod {
namespace {

EnsembleConfig make(std::vector<std::size_t> widths, double p, DistributionSpec law) {
  return EnsembleConfig(Architecture(std::move(widths)), p, std::move(law));
}

TEST(ExactMoment, FirstMomentIsOneExactly) {
  for (double p : {1.0, 0.5, 0.25}) {
    auto config = make({3, 2, 4}, p, DistributionSpec::gaussian());
    auto result = exact_moment(config, UnitVector::uniform(3), 1);
    ASSERT_TRUE(result.exact.has_value());
    EXPECT_EQ(*result.exact, Rational(1));
  }
}

TEST(ExactMoment, ChiSquareSingleLayer) {
  auto config = make({2, 2}, 1.0, DistributionSpec::gaussian());
  auto result = exact_moment(config, UnitVector::e1(2), 2);
  ASSERT_TRUE(result.exact.has_value());
  EXPECT_EQ(*result.exact, Rational(2));
}

TEST(ExactMoment, ChiSquareTwoLayers) {
  auto config = make({2, 2, 2}, 1.0, DistributionSpec::gaussian());
  auto result = exact_moment(config, UnitVector::e1(2), 2);
  EXPECT_EQ(*result.exact, Rational(4));
}

TEST(ExactMoment, RademacherUniformInput) {
  auto config = make({2, 2}, 1.0, DistributionSpec::rademacher());
  auto result = exact_moment(config, UnitVector::uniform(2), 2);
  EXPECT_EQ(*result.exact, Rational(3, 2));
}

TEST(ExactMoment, DeterministicRademacherCase) {
  auto config = make({2, 2}, 1.0, DistributionSpec::rademacher());
  for (int k = 1; k <= 4; ++k) {
    EXPECT_EQ(*exact_moment(config, UnitVector::e1(2), k).exact, Rational(1)) << "k=" << k;
  }
}

TEST(ExactMoment, ChiSquareHigherMoments) {
  // E[(chi^2_n / n)^k] = prod_{j<k} (n + 2j) / n.
  for (std::size_t n : {1u, 3u, 5u}) {
    auto config = make({4, n}, 1.0, DistributionSpec::gaussian());
    for (int k = 1; k <= 5; ++k) {
      Rational expected = 1;
      for (int j = 0; j < k; ++j) expected *= Rational(static_cast<long long>(n) + 2 * j, static_cast<long long>(n));
      EXPECT_EQ(*exact_moment(config, UnitVector::uniform(4), k).exact, expected) << "n=" << n << " k=" << k;
    }
  }
}

TEST(ExactMoment, GeneralVectorUsesFloatingMode) {
  auto config = make({3, 2, 2}, 0.5, DistributionSpec::gaussian());
  auto u = UnitVector::from_coordinates({1.0, 2.0, -0.5});
  auto result = exact_moment(config, u, 2);
  EXPECT_FALSE(result.exact.has_value());
  auto oracle = brute_force_moment(config, u, 2);
  EXPECT_NEAR(result.value, oracle.value, 1e-10 * oracle.value);
}

TEST(ExactMoment, MatchesTupleTransfer) {
  for (double p : {1.0, 0.5}) {
    for (auto law : {DistributionSpec::gaussian(), DistributionSpec::rademacher(),
                     DistributionSpec::uniform_symmetric()}) {
      auto config = make({3, 2, 3}, p, law);
      for (int k = 1; k <= 3; ++k) {
        auto a = exact_moment(config, UnitVector::uniform(3), k);
        auto b = path_sum_moment(config, UnitVector::uniform(3), k);
        EXPECT_EQ(*a.exact, *b.exact) << law.name() << " p=" << p << " k=" << k;
      }
    }
  }
}

TEST(ExactMoment, OracleGridSample) {
  for (double p : {1.0, 0.5}) {
    for (auto law : {DistributionSpec::gaussian(), DistributionSpec::rademacher()}) {
      for (const auto& widths : std::vector<std::vector<std::size_t>>{{1, 3}, {3, 2, 1}, {2, 3, 2, 3}}) {
        auto config = make(widths, p, law);
        for (auto u : {UnitVector::e1(widths[0]), UnitVector::uniform(widths[0])}) {
          for (int k = 1; k <= 2; ++k) {
            auto exact = exact_moment(config, u, k);
            auto oracle = brute_force_moment(config, u, k);
            ASSERT_TRUE(exact.exact && oracle.exact);
            EXPECT_EQ(*exact.exact, *oracle.exact);
          }
        }
      }
    }
  }
}

TEST(ExactMoment, BudgetIsCheckedFirst) {
  auto config = make({4, 4, 4}, 1.0, DistributionSpec::gaussian());
  MomentOptions options;
  options.budget = 10.0;
  try {
    exact_moment(config, UnitVector::e1(4), 3, options);
    FAIL() << "expected BudgetExceeded";
  } catch (const BudgetExceeded& e) {
    EXPECT_EQ(e.cost(), exact_moment_cost(config, 3));
    EXPECT_GT(e.cost(), 10.0);
  }
}

TEST(ExactMoment, RejectsBadOrder) {
  auto config = make({2, 2}, 1.0, DistributionSpec::gaussian());
  EXPECT_THROW(exact_moment(config, UnitVector::e1(2), 0), std::invalid_argument);
  EXPECT_THROW(exact_moment(config, UnitVector::e1(2), 9), std::invalid_argument);
  EXPECT_THROW(exact_moment(config, UnitVector::e1(3), 2), DimensionMismatch);
}

TEST(ExactMoment, AsymptoticRegimeFlag) {
  auto config = make({2, 2}, 1.0, DistributionSpec::gaussian());
  EXPECT_TRUE(exact_moment(config, UnitVector::e1(2), 2).in_asymptotic_regime);
  EXPECT_FALSE(exact_moment(config, UnitVector::e1(2), 3).in_asymptotic_regime);
}

TEST(ExactMoment, AsymptoticConsistency) {
  const std::size_t depth = 4;
  for (std::size_t n : {8u, 16u, 32u}) {
    std::vector<std::size_t> widths(depth + 1, n);
    auto config = make(widths, 1.0, DistributionSpec::gaussian());
    auto u = UnitVector::e1(n);
    const double beta = compute_beta(config, u).beta;
    const double m2 = exact_moment(config, u, 2).value;
    EXPECT_LE(std::abs(std::log(m2) - beta), 8.0 * depth / (double(n) * n)) << "n=" << n;
  }
}

TEST(BruteForce, FullEnumerationAgreesWithEvenPaths) {
  for (double p : {1.0, 0.5}) {
    auto config = make({2, 2, 1}, p, DistributionSpec::rademacher());
    for (auto u : {UnitVector::e1(2), UnitVector::uniform(2)}) {
      for (int k = 1; k <= 3; ++k) {
        auto full = brute_force_moment(config, u, k, {}, BruteForceMethod::FullEnumeration);
        auto paths = brute_force_moment(config, u, k, {}, BruteForceMethod::EvenPaths);
        EXPECT_EQ(*full.exact, *paths.exact) << "p=" << p << " k=" << k;
        EXPECT_EQ(*full.exact, *exact_moment(config, u, k).exact);
      }
    }
  }
}

TEST(BruteForce, SixteenSignMatrices) {
  auto config = make({2, 2}, 1.0, DistributionSpec::rademacher());
  auto result = brute_force_moment(config, UnitVector::uniform(2), 2, {}, BruteForceMethod::FullEnumeration);
  EXPECT_EQ(*result.exact, Rational(3, 2));
  EXPECT_EQ(result.cost, 16.0);
}

TEST(BruteForce, ChiSquareTwoLayers) {
  auto config = make({2, 2, 2}, 1.0, DistributionSpec::gaussian());
  EXPECT_EQ(*brute_force_moment(config, UnitVector::e1(2), 2).exact, Rational(4));
}

TEST(BruteForce, FirstMomentOnFeasibleInstances) {
  for (auto law : {DistributionSpec::gaussian(), DistributionSpec::uniform_symmetric()}) {
    auto config = make({3, 4, 2}, 0.5, law);
    EXPECT_EQ(*brute_force_moment(config, UnitVector::uniform(3), 1).exact, Rational(1));
  }
}

TEST(BruteForce, FullEnumerationNeedsDiscreteLaw) {
  auto config = make({2, 2}, 1.0, DistributionSpec::gaussian());
  EXPECT_THROW(brute_force_moment(config, UnitVector::e1(2), 2, {}, BruteForceMethod::FullEnumeration),
               std::invalid_argument);
}

TEST(BruteForce, BudgetExceeded) {
  auto config = make({4, 4, 4, 4}, 1.0, DistributionSpec::gaussian());
  MomentOptions options;
  options.budget = 1e3;
  EXPECT_THROW(brute_force_moment(config, UnitVector::e1(4), 2, options), BudgetExceeded);
}

TEST(TheoryMoment, Values) {
  BetaParams beta;
  beta.beta = 0.5;
  EXPECT_DOUBLE_EQ(theory_moment(beta, 1), 1.0);
  EXPECT_NEAR(theory_moment(beta, 2), 1.648721, 1e-6);
  beta.beta = 0.0;
  for (int k = 1; k <= 6; ++k) EXPECT_EQ(theory_moment(beta, k), 1.0);
  EXPECT_THROW(theory_moment(beta, 0), std::invalid_argument);
}

TEST(PathCount, SingleLayerAllOnes) {
  // Edges (0,0) and (1,1): each multiplicity 1.
  std::vector<EdgeMultiplicity> edges{EdgeMultiplicity(2, 2, {1, 0, 0, 1})};
  std::vector<std::size_t> end{0, 1};
  auto count = verify_path_count(edges, end, 2);
  EXPECT_EQ(count.enumerated, 1);
  EXPECT_EQ(count.formula, 1);
}

TEST(PathCount, SingleLayerColumnPair) {
  std::vector<EdgeMultiplicity> edges{EdgeMultiplicity(2, 2, {1, 0, 1, 0})};
  std::vector<std::size_t> end{0, 0};
  auto count = verify_path_count(edges, end, 2);
  EXPECT_EQ(count.enumerated, 2);
  EXPECT_EQ(count.formula, 2);
}

TEST(PathCount, TwoLayerChain) {
  // Layer 1 has c = 2 (column pair), layer 2 has c = 1.
  std::vector<EdgeMultiplicity> edges{EdgeMultiplicity(2, 2, {1, 0, 1, 0}),
                                      EdgeMultiplicity(2, 2, {2, 0, 0, 0})};
  std::vector<std::size_t> end{0, 0};
  auto count = verify_path_count(edges, end, 2);
  EXPECT_EQ(count.formula, 2);
  EXPECT_EQ(count.enumerated, 2);
}

TEST(PathCount, RandomizedAgreement) {
  RngStream rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t ell = 1 + rng() % 3;
    const std::size_t depth = 1 + rng() % 2;
    std::vector<std::size_t> widths(depth + 1);
    for (auto& n : widths) n = 1 + rng() % 3;
    // Random paths give a compatible edge sequence.
    std::vector<std::vector<std::size_t>> gamma(depth + 1, std::vector<std::size_t>(ell));
    for (std::size_t i = 0; i <= depth; ++i) {
      for (auto& v : gamma[i]) v = rng() % widths[i];
    }
    std::vector<EdgeMultiplicity> edges;
    for (std::size_t i = 1; i <= depth; ++i) {
      edges.push_back(EdgeMultiplicity::from_tuples(gamma[i - 1], gamma[i], widths[i - 1], widths[i]));
    }
    auto count = verify_path_count(edges, gamma[depth], ell);
    EXPECT_EQ(count.enumerated, count.formula);
    EXPECT_GE(count.enumerated, 1);
  }
}

TEST(PathCount, RejectsIncompatibleSequence) {
  std::vector<EdgeMultiplicity> edges{EdgeMultiplicity(2, 2, {1, 0, 1, 0}),
                                      EdgeMultiplicity(2, 2, {0, 0, 2, 0})};
  std::vector<std::size_t> end{0, 0};
  EXPECT_THROW(verify_path_count(edges, end, 2), std::invalid_argument);
}

TEST(PathCount, Budget) {
  std::vector<EdgeMultiplicity> edges{EdgeMultiplicity(8, 1, {1, 1, 1, 1, 1, 1, 1, 1})};
  std::vector<std::size_t> end(8, 0);
  EXPECT_THROW(verify_path_count(edges, end, 8, 1e6), BudgetExceeded);
}

}  // namespace
}  // namespace matprod
