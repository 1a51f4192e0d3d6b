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

#include "matprod/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

#include "matprod/errors.hpp"

namespace matprod {

unsigned resolve_threads(unsigned requested) {
  unsigned threads = requested;
  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("MATPROD_THREADS")) {
      char* end = nullptr;
      const long cap = std::strtol(env, &end, 10);
      if (end != env && *end == '\0' && cap > 0) threads = std::min(threads, static_cast<unsigned>(cap));
    }
  }
  return threads;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_lock;
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    const std::size_t begin = count * w / threads;
    const std::size_t end = count * (w + 1) / threads;
    workers.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> guard(failure_lock);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& worker : workers) worker.join();
  if (failure) std::rethrow_exception(failure);
}

SampleBatch collect_trials(std::size_t trials, std::uint64_t seed, StreamDomain domain, std::string fingerprint,
                           const RunOptions& options, const std::function<LogNormSample(RngStream&)>& draw) {
  std::vector<double> values(trials);
  std::vector<std::uint8_t> zero(trials, 0);
  parallel_for(trials, resolve_threads(options.threads), [&](std::size_t t) {
    RngStream rng = make_stream(seed, options.first_trial + t, domain);
    const LogNormSample sample = draw(rng);
    if (sample) {
      values[t] = *sample;
    } else {
      zero[t] = 1;
    }
  });

  SampleBatch batch;
  batch.trials = trials;
  batch.seed = seed;
  batch.fingerprint = std::move(fingerprint);
  batch.samples.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    if (zero[t] != 0) {
      ++batch.zero_event_count;
    } else {
      batch.samples.push_back(values[t]);
    }
  }
  std::sort(batch.samples.begin(), batch.samples.end());
  return batch;
}

std::string config_fingerprint(const EnsembleConfig& config, const UnitVector& u) {
  // FNV-1a over a canonical text rendering.
  std::string text = "widths=";
  for (std::size_t n : config.architecture.widths()) text += std::to_string(n) + ",";
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, ";p=%.17g;", config.p);
  text += buffer;
  text += "law=" + config.entry_law.name() + ";u=" + u.description();
  for (double x : u.coordinates()) {
    std::snprintf(buffer, sizeof buffer, ",%.17g", x);
    text += buffer;
  }
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

SampleBatch run_trials(const EnsembleConfig& config, const UnitVector& u, std::size_t trials, std::uint64_t seed,
                       const RunOptions& options) {
  if (u.dimension() != config.architecture.input_width()) {
    throw DimensionMismatch("run_trials: u does not match n_0");
  }
  return collect_trials(trials, seed, StreamDomain::ProductEnsemble, config_fingerprint(config, u), options,
                        [&](RngStream& rng) { return sample_log_norm(config, u, rng); });
}

MomentEstimate empirical_moment(const SampleBatch& batch, int k) {
  if (batch.trials < 2) throw InsufficientSamples("empirical_moment needs at least two trials");
  const double n = static_cast<double>(batch.trials);
  // Zero events contribute exp(k L) = 0 to both sums.
  double sum = 0.0;
  for (double x : batch.samples) sum += std::exp(k * x);
  const double mean = sum / n;
  double sq = static_cast<double>(batch.zero_event_count) * mean * mean;
  for (double x : batch.samples) {
    const double dev = std::exp(k * x) - mean;
    sq += dev * dev;
  }
  MomentEstimate estimate;
  estimate.k = k;
  estimate.estimate = mean;
  estimate.standard_error = std::sqrt(sq / (n - 1.0) / n);
  estimate.trials = batch.trials;
  return estimate;
}

KSReport ks_to_gaussian(const SampleBatch& batch, double mean, double variance) {
  if (batch.samples.empty()) throw EmptyBatch("ks_to_gaussian: no nonzero samples");
  if (!(variance > 0.0)) throw std::invalid_argument("ks_to_gaussian: variance must be positive");
  char reference[96];
  std::snprintf(reference, sizeof reference, "Normal(%.17g, %.17g)", mean, variance);
  return one_sample_ks(
      batch.samples, [mean, variance](double t) { return normal_cdf(t, mean, variance); }, reference);
}

SampleBatch chi_square_product_sampler(std::span<const std::size_t> widths, std::size_t trials, std::uint64_t seed,
                                       const RunOptions& options) {
  for (std::size_t n : widths) {
    if (n == 0) throw std::invalid_argument("chi_square_product_sampler: widths must be >= 1");
  }
  std::vector<std::size_t> dof(widths.begin(), widths.end());
  std::string fingerprint = "chi2:";
  for (std::size_t n : dof) fingerprint += std::to_string(n) + ",";
  return collect_trials(trials, seed, StreamDomain::ChiSquare, fingerprint, options, [&dof](RngStream& rng) {
    boost::random::normal_distribution<double> normal;
    double total = 0.0;
    for (std::size_t n : dof) {
      double chi2 = 0.0;
      if (n <= 32) {
        for (std::size_t j = 0; j < n; ++j) {
          const double z = normal(rng);
          chi2 += z * z;
        }
      } else {
        boost::random::gamma_distribution<double> gamma(0.5 * static_cast<double>(n), 2.0);
        chi2 = gamma(rng);
      }
      total += std::log(chi2 / static_cast<double>(n));
    }
    return LogNormSample(total);
  });
}

}  // namespace matprod
