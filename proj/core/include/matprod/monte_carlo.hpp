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

// Reproducible Monte Carlo sampling of ln Z_d(u). Trial t always draws from
// make_stream(seed, t, domain), so batches do not depend on the thread count
// and disjoint trial ranges can be merged.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "matprod/model.hpp"
#include "matprod/rng.hpp"
#include "matprod/stats.hpp"

namespace matprod {

struct SampleBatch {
  std::vector<double> samples;  // ascending, zero events excluded
  std::size_t zero_event_count = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::string fingerprint;

  double zero_event_rate() const {
    return trials == 0 ? 0.0 : static_cast<double>(zero_event_count) / static_cast<double>(trials);
  }
};

struct RunOptions {
  unsigned threads = 0;           // 0: MATPROD_THREADS, else hardware concurrency
  std::uint64_t first_trial = 0;  // offset into the per-trial stream sequence
};

/// Effective worker count: `requested` if nonzero, else the hardware
/// concurrency, capped by MATPROD_THREADS when that is set to a positive
/// integer.
unsigned resolve_threads(unsigned requested = 0);

/// Runs body(i) for i in [0, count) over `threads` workers in contiguous
/// blocks. body must only write to slot i of its outputs.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

/// Runs `trials` draws of `draw(stream)` where trial t uses
/// make_stream(seed, first_trial + t, domain), and collects them into a batch.
SampleBatch collect_trials(std::size_t trials, std::uint64_t seed, StreamDomain domain, std::string fingerprint,
                           const RunOptions& options, const std::function<LogNormSample(RngStream&)>& draw);

/// Stable hash of (widths, p, law, u) as 16 hex digits.
std::string config_fingerprint(const EnsembleConfig& config, const UnitVector& u);

SampleBatch run_trials(const EnsembleConfig& config, const UnitVector& u, std::size_t trials, std::uint64_t seed,
                       const RunOptions& options = {});

struct MomentEstimate {
  int k = 0;
  double estimate = 0.0;
  double standard_error = 0.0;
  std::size_t trials = 0;
};

/// Mean of exp(k L) over all trials, zero events counting as 0. Needs at
/// least two trials (InsufficientSamples).
MomentEstimate empirical_moment(const SampleBatch& batch, int k);

/// One-sample KS of the nonzero samples against Normal(mean, variance).
/// EmptyBatch when no samples are left.
KSReport ks_to_gaussian(const SampleBatch& batch, double mean, double variance);

/// Samples of sum_i ln(chi^2_{n_i} / n_i).
SampleBatch chi_square_product_sampler(std::span<const std::size_t> widths, std::size_t trials, std::uint64_t seed,
                                       const RunOptions& options = {});

}  // namespace matprod
