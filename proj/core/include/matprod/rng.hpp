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

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include <boost/random/normal_distribution.hpp>

#include "matprod/distribution.hpp"

namespace matprod {

inline std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// xoshiro256** (Blackman & Vigna). Satisfies UniformRandomBitGenerator.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed = 0) noexcept {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  bool operator==(const Xoshiro256&) const = default;

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

  std::array<std::uint64_t, 4> state_{};
};

using RngStream = Xoshiro256;

/// Independent stream families sharing one user seed.
enum class StreamDomain : std::uint64_t {
  ProductEnsemble = 1,
  ReluNetwork = 2,
  ChiSquare = 3,
};

/// Stream for trial `index` of `domain` under `seed`. Depends only on the
/// triple, never on scheduling.
RngStream make_stream(std::uint64_t seed, std::uint64_t index,
                      StreamDomain domain = StreamDomain::ProductEnsemble);

/// Draws i.i.d. entries from a validated DistributionSpec.
class EntrySampler {
 public:
  explicit EntrySampler(const DistributionSpec& law);

  double operator()(RngStream& rng) {
    switch (kind_) {
      case LawKind::StandardGaussian:
        return normal_(rng);
      case LawKind::Rademacher:
        return (rng() >> 63) != 0 ? 1.0 : -1.0;
      case LawKind::UniformSymmetric:
        return kSqrt3 * (2.0 * rng.uniform01() - 1.0);
      case LawKind::DiscreteSymmetric:
        return draw_discrete(rng.uniform01());
    }
    return 0.0;
  }

  void fill(RngStream& rng, std::span<double> out) {
    for (double& x : out) x = (*this)(rng);
  }

 private:
  static constexpr double kSqrt3 = 1.7320508075688772;

  double draw_discrete(double u) const;

  LawKind kind_;
  boost::random::normal_distribution<double> normal_;
  std::vector<double> values_;
  std::vector<double> cumulative_;
};

}  // namespace matprod
