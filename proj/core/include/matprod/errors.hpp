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

#include <stdexcept>
#include <string>

namespace matprod {

// Entry law fails mean-0 / variance-1 normalization.
class NormalizationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Discrete entry law whose atoms are not mirrored about 0.
class AsymmetryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Atom-bearing law used where an atomless law is required.
class AtomicLawError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InsufficientSamples : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EmptyBatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised before an exact enumeration starts when its estimated cost exceeds
/// the configured budget. The estimate is carried so callers can report it.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, double cost, double budget)
      : std::runtime_error(what + " (estimated cost " + std::to_string(cost) +
                           " > budget " + std::to_string(budget) + ")"),
        cost_(cost),
        budget_(budget) {}

  double cost() const noexcept { return cost_; }
  double budget() const noexcept { return budget_; }

 private:
  double cost_;
  double budget_;
};

}  // namespace matprod
