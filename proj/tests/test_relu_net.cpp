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
#include "matprod/relu_net.hpp"

namespace matprod {
namespace {

ReluNet scalar_net(double w, double b) { return ReluNet(Architecture({1, 1}), {{w}}, {{b}}); }

TEST(ReluNetConfig, RejectsAtoms) {
  EXPECT_THROW(ReluNetConfig(Architecture({2, 2}), DistributionSpec::rademacher()), AtomicLawError);
  EXPECT_THROW(ReluNetConfig(Architecture({2, 2}), DistributionSpec::gaussian(), DistributionSpec::rademacher()),
               AtomicLawError);
  EXPECT_THROW(ReluNetConfig(Architecture({2, 2}), DistributionSpec::gaussian(), 0.0), std::invalid_argument);
  EXPECT_NO_THROW(ReluNetConfig(Architecture({2, 2}), DistributionSpec::uniform_symmetric()));
}

TEST(Forward, ReluIsComponentwise) {
  ReluNet net(Architecture({2, 2}), {{1, 0, 0, 1}}, {{0, 0}});
  std::vector<double> x{-1.0, 2.0};
  auto trace = forward(net, x);
  EXPECT_EQ(trace.activations[0], (std::vector<double>{0.0, 2.0}));
  EXPECT_EQ(trace.preactivations[0], (std::vector<double>{-1.0, 2.0}));
}

TEST(Forward, IdentityWeightsPassNonnegativeInput) {
  const double s = 0.75;
  ReluNet net(Architecture({3, 3}), {{s, 0, 0, 0, s, 0, 0, 0, s}}, {{0, 0, 0}});
  std::vector<double> x{0.0, 1.0, 2.5};
  auto trace = forward(net, x);
  for (std::size_t a = 0; a < 3; ++a) EXPECT_EQ(trace.output()[a], s * x[a]);
}

TEST(Forward, NegativePreactivationsStayDead) {
  ReluNet net(Architecture({2, 2, 2}), {{1, 1, 1, 1}, {3, -1, 2, 5}}, {{-10, -10}, {0, 0}});
  std::vector<double> x{1.0, 1.0};
  auto trace = forward(net, x);
  for (double v : trace.activations[0]) EXPECT_EQ(v, 0.0);
  for (double v : trace.activations[1]) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(forward(net, std::vector<double>{1.0}), DimensionMismatch);
}

TEST(JacobianLogNorm, ScalarChainRule) {
  std::vector<double> x{2.0};
  auto open = jacobian_log_norm(scalar_net(-1.5, 4.0), x, UnitVector::e1(1));
  ASSERT_TRUE(open.has_value());
  EXPECT_DOUBLE_EQ(*open, std::log(2.25));
  EXPECT_FALSE(jacobian_log_norm(scalar_net(-1.5, 2.0), x, UnitVector::e1(1)).has_value());
  // A tie at 0 counts as closed.
  EXPECT_FALSE(jacobian_log_norm(scalar_net(-1.0, 2.0), x, UnitVector::e1(1)).has_value());
}

TEST(JacobianLogNorm, MatchesDenseJacobian) {
  ReluNetConfig config(Architecture({4, 6, 5, 3}), DistributionSpec::gaussian());
  auto x = default_input(4);
  auto u = UnitVector::from_coordinates({0.2, -1.0, 0.5, 0.3});
  for (std::uint64_t s = 0; s < 30; ++s) {
    RngStream rng(s);
    auto net = ReluNet::sample(config, rng);
    auto jac = jacobian_matrix(net, x);
    double sq = 0.0;
    for (std::size_t r = 0; r < 3; ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < 4; ++c) acc += jac.matrix[r * 4 + c] * u[c];
      sq += acc * acc;
    }
    auto sample = jacobian_log_norm(net, x, u);
    if (!sample) {
      EXPECT_EQ(sq, 0.0);
      continue;
    }
    EXPECT_NEAR(*sample, std::log(4.0 / 3.0 * sq), 1e-10);
  }
}

TEST(JacobianMatrix, FiniteDifferences) {
  RngStream meta(314);
  int checked = 0;
  for (std::uint64_t s = 0; checked < 50; ++s) {
    ASSERT_LT(s, 5000u);
    const std::size_t depth = 1 + meta() % 3;
    std::vector<std::size_t> widths(depth + 1);
    for (auto& n : widths) n = 1 + meta() % 8;
    ReluNetConfig config(Architecture(widths), DistributionSpec::gaussian());
    RngStream rng = make_stream(s, 0, StreamDomain::ReluNetwork);
    auto net = ReluNet::sample(config, rng);
    std::vector<double> x(widths[0]), dir(widths[0]);
    for (auto& v : x) v = 2.0 * meta.uniform01() - 1.0;
    for (auto& v : dir) v = 2.0 * meta.uniform01() - 1.0;
    const auto u = UnitVector::from_coordinates(dir);

    auto trace = forward(net, x);
    bool near_kink = false;
    for (const auto& layer : trace.preactivations) {
      for (double a : layer) near_kink = near_kink || std::abs(a) < 1e-4;
    }
    if (near_kink) continue;
    ++checked;

    const double eps = 1e-6;
    std::vector<double> shifted(x);
    for (std::size_t c = 0; c < x.size(); ++c) shifted[c] += eps * u[c];
    auto moved = forward(net, shifted);
    auto jac = jacobian_matrix(net, x);
    double err = 0.0;
    for (std::size_t r = 0; r < widths.back(); ++r) {
      double ju = 0.0;
      for (std::size_t c = 0; c < x.size(); ++c) ju += jac.matrix[r * x.size() + c] * u[c];
      const double fd = (moved.output()[r] - trace.output()[r]) / eps;
      err += (fd - ju) * (fd - ju);
    }
    EXPECT_LE(std::sqrt(err), 1e-5) << "net " << s;
  }
}

TEST(JacobianMatrix, OpenFractionIsHalf) {
  ReluNetConfig config(Architecture({8, 16, 16, 16}), DistributionSpec::gaussian());
  auto x = default_input(8);
  const int nets = 10000;
  std::vector<double> open(3, 0.0);
  for (int t = 0; t < nets; ++t) {
    auto rng = make_stream(6, t, StreamDomain::ReluNetwork);
    auto jac = jacobian_matrix(ReluNet::sample(config, rng), x);
    for (std::size_t j = 0; j < 3; ++j) open[j] += double(jac.open_count[j]);
  }
  const double neurons = 16.0 * nets;
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_LE(std::abs(open[j] / neurons - 0.5), 5.0 * std::sqrt(0.25 / neurons)) << "layer " << j + 1;
  }
}

TEST(EvgpBeta, Values) {
  std::vector<std::size_t> widths(17, 64);
  ReluNetConfig deep(Architecture(widths), DistributionSpec::gaussian());
  auto beta = evgp_beta(deep, UnitVector::e1(64));
  EXPECT_DOUBLE_EQ(beta.beta, 1.25);
  EXPECT_EQ(beta.term_fourth, 0.0);
  ReluNetConfig uniform(Architecture({5, 10, 7}), DistributionSpec::uniform_symmetric());
  EXPECT_NEAR(evgp_beta(uniform, UnitVector::e1(5)).term_fourth, -0.24, 1e-12);
}

TEST(Comparison, SelfComparisonIsZero) {
  EnsembleConfig product(Architecture({8, 16, 16, 16}), 0.5, DistributionSpec::gaussian());
  auto a = run_trials(product, UnitVector::uniform(8), 2000, 10);
  auto b = run_trials(product, UnitVector::uniform(8), 2000, 10);
  EXPECT_EQ(two_sample_ks(a.samples, b.samples).statistic, 0.0);
}

TEST(Comparison, RequiresEnoughTrials) {
  ReluNetConfig config(Architecture({2, 2}), DistributionSpec::gaussian());
  EXPECT_THROW(compare_jacobian_vs_product(config, default_input(2), UnitVector::e1(2), 99, 0),
               std::invalid_argument);
}

TEST(Comparison, InputChoiceDoesNotMatter) {
  ReluNetConfig config(Architecture({8, 16, 16, 16}), DistributionSpec::gaussian());
  const auto u = UnitVector::uniform(8);
  std::vector<double> e1(8, 0.0);
  e1[0] = 1.0;
  auto at_e1 = compare_jacobian_vs_product(config, e1, u, 20000, 1);
  auto at_ones = compare_jacobian_vs_product(config, std::vector<double>(8, 1.0), u, 20000, 2);
  EXPECT_LE(two_sample_ks(at_e1.jacobian.samples, at_ones.jacobian.samples).statistic, 0.02);
}

}  // namespace
}  // namespace matprod
