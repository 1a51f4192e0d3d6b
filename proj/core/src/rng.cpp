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

#include "matprod/rng.hpp"

#include <algorithm>

namespace matprod {

RngStream make_stream(std::uint64_t seed, std::uint64_t index, StreamDomain domain) {
  // Mix the three words through splitmix64 so neighbouring (seed, index)
  // pairs land on unrelated states.
  std::uint64_t state = seed;
  std::uint64_t key = splitmix64(state);
  state = key ^ index;
  key = splitmix64(state);
  state = key ^ static_cast<std::uint64_t>(domain);
  return RngStream(splitmix64(state));
}

EntrySampler::EntrySampler(const DistributionSpec& law) : kind_(law.kind()) {
  if (kind_ == LawKind::DiscreteSymmetric) {
    double running = 0.0;
    for (const Atom& atom : law.atoms()) {
      running += atom.probability;
      values_.push_back(atom.value);
      cumulative_.push_back(running);
    }
  }
}

double EntrySampler::draw_discrete(double u) const {
  const double target = u * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  if (it == cumulative_.end()) --it;
  return values_[static_cast<std::size_t>(it - cumulative_.begin())];
}

}  // namespace matprod
