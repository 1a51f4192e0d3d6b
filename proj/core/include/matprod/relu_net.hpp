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

// Fully connected ReLU networks N(x) = ReLU(A_d(... ReLU(A_1 x))) with
// A_j(y) = W_j y + B_j, weights of variance 2/n_{j-1} and biases of scale
// sigma_b, and their input-output Jacobians.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "matprod/distribution.hpp"
#include "matprod/model.hpp"
#include "matprod/monte_carlo.hpp"
#include "matprod/rng.hpp"
#include "matprod/stats.hpp"

namespace matprod {

struct ReluNetConfig {
  /// Throws AtomicLawError when the weight or bias law has atoms.
  ReluNetConfig(Architecture architecture, DistributionSpec weight_law, DistributionSpec bias_law,
                double bias_scale = 1.0);
  /// Biases from the weight family.
  ReluNetConfig(Architecture architecture, DistributionSpec weight_law, double bias_scale = 1.0);

  Architecture architecture;
  DistributionSpec weight_law;
  DistributionSpec bias_law;
  double bias_scale;
};

class ReluNet {
 public:
  /// Layer by layer: n_j x n_{j-1} weights row-major, then n_j biases.
  static ReluNet sample(const ReluNetConfig& config, RngStream& rng);
  /// Weights already scaled; weights[j-1] is n_j x n_{j-1} row-major.
  ReluNet(Architecture architecture, std::vector<std::vector<double>> weights,
          std::vector<std::vector<double>> biases);

  const Architecture& architecture() const noexcept { return architecture_; }
  std::span<const double> weights(std::size_t layer) const { return weights_.at(layer - 1); }
  std::span<const double> biases(std::size_t layer) const { return biases_.at(layer - 1); }

 private:
  Architecture architecture_;
  std::vector<std::vector<double>> weights_;
  std::vector<std::vector<double>> biases_;
};

struct ForwardTrace {
  std::vector<double> input;
  std::vector<std::vector<double>> preactivations;  // act^(j), j = 1..d
  std::vector<std::vector<double>> activations;     // ReLU(act^(j))

  std::span<const double> output() const { return activations.back(); }
};

/// Throws DimensionMismatch when dim(x) != n_0.
ForwardTrace forward(const ReluNet& net, std::span<const double> x);

/// ln((n_0/n_d) |Jac u|^2) by vector propagation with per-layer
/// renormalization; nullopt if some layer closes every path. A neuron with
/// preactivation exactly 0 counts as closed.
LogNormSample jacobian_log_norm(const ReluNet& net, std::span<const double> x, const UnitVector& u);

struct JacobianResult {
  std::vector<double> matrix;           // n_d x n_0, row-major
  std::vector<std::size_t> open_count;  // open neurons per layer j = 1..d
};

/// Dense Jacobian, for tiny nets.
JacobianResult jacobian_matrix(const ReluNet& net, std::span<const double> x);

/// (1, ..., 1) / sqrt(n).
std::vector<double> default_input(std::size_t n);

/// compute_beta at p = 1/2 with the weight law's fourth moment.
BetaParams evgp_beta(const ReluNetConfig& config, const UnitVector& u);

struct JacobianComparison {
  SampleBatch jacobian;
  SampleBatch product;
  KSReport ks;
};

/// `trials` networks (trial t drawn from make_stream(seed, t, ReluNetwork))
/// against `trials` product samples at mask probability `product_p` with the
/// same widths and weight law. Throws std::invalid_argument for trials < 100.
JacobianComparison compare_jacobian_vs_product(const ReluNetConfig& config, std::span<const double> x,
                                               const UnitVector& u, std::size_t trials, std::uint64_t seed,
                                               double product_p = 0.5, const RunOptions& options = {});

}  // namespace matprod
