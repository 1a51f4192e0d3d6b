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

#include "matprod/relu_net.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "matprod/errors.hpp"

namespace matprod {

namespace {

void require_atomless(const DistributionSpec& law, const char* role) {
  validate_distribution(law);
  if (!law.atomless()) {
    throw AtomicLawError(std::string(role) + " law " + law.name() + " has atoms; an atomless law is required");
  }
}

void check_input(const ReluNet& net, std::span<const double> x) {
  if (x.size() != net.architecture().input_width()) {
    throw DimensionMismatch("input has dimension " + std::to_string(x.size()) + ", expected n_0 = " +
                            std::to_string(net.architecture().input_width()));
  }
}

}  // namespace

ReluNetConfig::ReluNetConfig(Architecture architecture_, DistributionSpec weight_law_, DistributionSpec bias_law_,
                             double bias_scale_)
    : architecture(std::move(architecture_)),
      weight_law(std::move(weight_law_)),
      bias_law(std::move(bias_law_)),
      bias_scale(bias_scale_) {
  require_atomless(weight_law, "weight");
  require_atomless(bias_law, "bias");
  if (!(bias_scale > 0.0)) throw std::invalid_argument("bias scale must be positive");
}

ReluNetConfig::ReluNetConfig(Architecture architecture_, DistributionSpec weight_law_, double bias_scale_)
    : ReluNetConfig(std::move(architecture_), weight_law_, weight_law_, bias_scale_) {}

ReluNet::ReluNet(Architecture architecture, std::vector<std::vector<double>> weights,
                 std::vector<std::vector<double>> biases)
    : architecture_(std::move(architecture)), weights_(std::move(weights)), biases_(std::move(biases)) {
  const std::size_t depth = architecture_.depth();
  if (weights_.size() != depth || biases_.size() != depth) {
    throw DimensionMismatch("ReluNet: expected one weight matrix and bias vector per layer");
  }
  for (std::size_t j = 1; j <= depth; ++j) {
    if (weights_[j - 1].size() != architecture_.width(j) * architecture_.width(j - 1) ||
        biases_[j - 1].size() != architecture_.width(j)) {
      throw DimensionMismatch("ReluNet: layer " + std::to_string(j) + " has the wrong shape");
    }
  }
}

ReluNet ReluNet::sample(const ReluNetConfig& config, RngStream& rng) {
  const Architecture& arch = config.architecture;
  EntrySampler weight_sampler(config.weight_law);
  EntrySampler bias_sampler(config.bias_law);
  std::vector<std::vector<double>> weights(arch.depth());
  std::vector<std::vector<double>> biases(arch.depth());
  for (std::size_t j = 1; j <= arch.depth(); ++j) {
    const double scale = std::sqrt(2.0 / static_cast<double>(arch.width(j - 1)));
    auto& w = weights[j - 1];
    w.resize(arch.width(j) * arch.width(j - 1));
    for (double& entry : w) entry = scale * weight_sampler(rng);
    auto& b = biases[j - 1];
    b.resize(arch.width(j));
    for (double& entry : b) entry = config.bias_scale * bias_sampler(rng);
  }
  return ReluNet(arch, std::move(weights), std::move(biases));
}

ForwardTrace forward(const ReluNet& net, std::span<const double> x) {
  check_input(net, x);
  const Architecture& arch = net.architecture();
  ForwardTrace trace;
  trace.input.assign(x.begin(), x.end());
  std::span<const double> current = trace.input;
  for (std::size_t j = 1; j <= arch.depth(); ++j) {
    const std::size_t n_in = arch.width(j - 1);
    const std::size_t n_out = arch.width(j);
    const auto w = net.weights(j);
    const auto b = net.biases(j);
    std::vector<double> pre(n_out);
    std::vector<double> post(n_out);
    for (std::size_t a = 0; a < n_out; ++a) {
      double acc = b[a];
      for (std::size_t c = 0; c < n_in; ++c) acc += w[a * n_in + c] * current[c];
      pre[a] = acc;
      post[a] = acc > 0.0 ? acc : 0.0;
    }
    trace.preactivations.push_back(std::move(pre));
    trace.activations.push_back(std::move(post));
    current = trace.activations.back();
  }
  return trace;
}

LogNormSample jacobian_log_norm(const ReluNet& net, std::span<const double> x, const UnitVector& u) {
  check_input(net, x);
  if (u.dimension() != x.size()) throw DimensionMismatch("u does not match n_0");
  const Architecture& arch = net.architecture();
  std::vector<double> state(x.begin(), x.end());
  std::vector<double> direction(u.coordinates().begin(), u.coordinates().end());
  std::vector<double> next_state;
  std::vector<double> next_direction;
  double log_norm = 0.0;
  for (std::size_t j = 1; j <= arch.depth(); ++j) {
    const std::size_t n_in = arch.width(j - 1);
    const std::size_t n_out = arch.width(j);
    const auto w = net.weights(j);
    const auto b = net.biases(j);
    next_state.assign(n_out, 0.0);
    next_direction.assign(n_out, 0.0);
    double sq = 0.0;
    for (std::size_t a = 0; a < n_out; ++a) {
      const double* row = w.data() + a * n_in;
      double act = b[a];
      for (std::size_t c = 0; c < n_in; ++c) act += row[c] * state[c];
      if (act <= 0.0) continue;
      next_state[a] = act;
      double dv = 0.0;
      for (std::size_t c = 0; c < n_in; ++c) dv += row[c] * direction[c];
      next_direction[a] = dv;
      sq += dv * dv;
    }
    if (sq == 0.0) return std::nullopt;
    log_norm += std::log(sq * static_cast<double>(n_in) / static_cast<double>(n_out));
    const double inv = 1.0 / std::sqrt(sq);
    for (double& v : next_direction) v *= inv;
    std::swap(state, next_state);
    std::swap(direction, next_direction);
  }
  return log_norm;
}

JacobianResult jacobian_matrix(const ReluNet& net, std::span<const double> x) {
  const ForwardTrace trace = forward(net, x);
  const Architecture& arch = net.architecture();
  const std::size_t n0 = arch.input_width();
  JacobianResult result;
  // Start from the identity and apply Diag(1{act > 0}) W_j layer by layer.
  std::vector<double> jac(n0 * n0, 0.0);
  for (std::size_t a = 0; a < n0; ++a) jac[a * n0 + a] = 1.0;
  for (std::size_t j = 1; j <= arch.depth(); ++j) {
    const std::size_t n_in = arch.width(j - 1);
    const std::size_t n_out = arch.width(j);
    const auto w = net.weights(j);
    const auto& pre = trace.preactivations[j - 1];
    std::vector<double> next(n_out * n0, 0.0);
    std::size_t open = 0;
    for (std::size_t a = 0; a < n_out; ++a) {
      if (!(pre[a] > 0.0)) continue;
      ++open;
      for (std::size_t c = 0; c < n_in; ++c) {
        const double weight = w[a * n_in + c];
        for (std::size_t col = 0; col < n0; ++col) next[a * n0 + col] += weight * jac[c * n0 + col];
      }
    }
    result.open_count.push_back(open);
    jac = std::move(next);
  }
  result.matrix = std::move(jac);
  return result;
}

std::vector<double> default_input(std::size_t n) {
  return std::vector<double>(n, 1.0 / std::sqrt(static_cast<double>(n)));
}

BetaParams evgp_beta(const ReluNetConfig& config, const UnitVector& u) {
  return compute_beta(EnsembleConfig(config.architecture, 0.5, config.weight_law), u);
}

JacobianComparison compare_jacobian_vs_product(const ReluNetConfig& config, std::span<const double> x,
                                               const UnitVector& u, std::size_t trials, std::uint64_t seed,
                                               double product_p, const RunOptions& options) {
  if (trials < 100) throw std::invalid_argument("compare_jacobian_vs_product needs at least 100 trials");
  if (x.size() != config.architecture.input_width()) throw DimensionMismatch("x does not match n_0");
  const EnsembleConfig product(config.architecture, product_p, config.weight_law);
  std::vector<double> input(x.begin(), x.end());

  JacobianComparison out;
  out.jacobian = collect_trials(trials, seed, StreamDomain::ReluNetwork, "relu:" + config_fingerprint(product, u),
                                options, [&](RngStream& rng) {
                                  const ReluNet net = ReluNet::sample(config, rng);
                                  return jacobian_log_norm(net, input, u);
                                });
  out.product = run_trials(product, u, trials, seed, options);
  out.ks = two_sample_ks(out.jacobian.samples, out.product.samples);
  return out;
}

}  // namespace matprod
