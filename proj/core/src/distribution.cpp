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

#include "matprod/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "matprod/errors.hpp"

namespace matprod {

namespace {

constexpr double kTolerance = 1e-12;

// (k-1)!! for even k, the Gaussian moment.
BigInt double_factorial_odd(int k) {
  BigInt result = 1;
  for (int j = k - 1; j > 1; j -= 2) result *= j;
  return result;
}

Rational pow_rational(const Rational& base, int exponent) {
  Rational result = 1;
  for (int j = 0; j < exponent; ++j) result *= base;
  return result;
}

}  // namespace

Rational to_rational(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("to_rational: non-finite value");
  if (value == 0.0) return Rational(0);
  int exponent = 0;
  double mantissa = std::frexp(value, &exponent);
  // mantissa * 2^53 is an exact integer.
  auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational result(scaled);
  if (exponent > 0) {
    result *= Rational(BigInt(1) << exponent);
  } else if (exponent < 0) {
    result /= Rational(BigInt(1) << -exponent);
  }
  return result;
}

DistributionSpec DistributionSpec::gaussian() { return DistributionSpec(LawKind::StandardGaussian); }

DistributionSpec DistributionSpec::rademacher() {
  return DistributionSpec(LawKind::Rademacher, {{-1.0, 0.5}, {1.0, 0.5}});
}

DistributionSpec DistributionSpec::uniform_symmetric() {
  return DistributionSpec(LawKind::UniformSymmetric);
}

DistributionSpec DistributionSpec::discrete(std::vector<Atom> atoms) {
  std::map<double, double> merged;
  for (const Atom& atom : atoms) {
    if (!std::isfinite(atom.value) || !std::isfinite(atom.probability) || atom.probability < 0.0) {
      throw NormalizationError("discrete law: atoms need finite values and nonnegative probabilities");
    }
    if (atom.probability > 0.0) merged[atom.value] += atom.probability;
  }
  std::vector<Atom> clean;
  clean.reserve(merged.size());
  for (const auto& [value, probability] : merged) clean.push_back({value, probability});
  if (clean.empty()) throw NormalizationError("discrete law: no atoms with positive probability");
  return DistributionSpec(LawKind::DiscreteSymmetric, std::move(clean));
}

bool DistributionSpec::atomless() const noexcept {
  return kind_ == LawKind::StandardGaussian || kind_ == LawKind::UniformSymmetric;
}

double DistributionSpec::moment(int k) const {
  if (k < 0) throw std::invalid_argument("moment order must be nonnegative");
  if (k == 0) return 1.0;
  switch (kind_) {
    case LawKind::StandardGaussian:
    case LawKind::Rademacher:
    case LawKind::UniformSymmetric:
      return to_double(*exact_moment(k));
    case LawKind::DiscreteSymmetric: {
      double sum = 0.0;
      for (const Atom& atom : atoms_) sum += atom.probability * std::pow(atom.value, k);
      return sum;
    }
  }
  return 0.0;
}

std::optional<Rational> DistributionSpec::exact_moment(int k) const {
  if (k < 0) throw std::invalid_argument("moment order must be nonnegative");
  if (k == 0) return Rational(1);
  switch (kind_) {
    case LawKind::StandardGaussian:
      if (k % 2 != 0) return Rational(0);
      return Rational(double_factorial_odd(k));
    case LawKind::Rademacher:
      return Rational(k % 2 == 0 ? 1 : 0);
    case LawKind::UniformSymmetric: {
      // E[X^k] = 3^{k/2} / (k + 1) for X uniform on [-sqrt 3, sqrt 3], k even.
      if (k % 2 != 0) return Rational(0);
      return pow_rational(Rational(3), k / 2) / Rational(k + 1);
    }
    case LawKind::DiscreteSymmetric: {
      Rational sum = 0;
      for (const Atom& atom : atoms_) {
        sum += to_rational(atom.probability) * pow_rational(to_rational(atom.value), k);
      }
      return sum;
    }
  }
  return std::nullopt;
}

std::string DistributionSpec::name() const {
  switch (kind_) {
    case LawKind::StandardGaussian:
      return "gaussian";
    case LawKind::Rademacher:
      return "rademacher";
    case LawKind::UniformSymmetric:
      return "uniform";
    case LawKind::DiscreteSymmetric: {
      std::ostringstream out;
      out.precision(17);
      out << "discrete:";
      for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (i > 0) out << ',';
        out << atoms_[i].value << ':' << atoms_[i].probability;
      }
      return out.str();
    }
  }
  return "unknown";
}

DistributionSpec validate_distribution(DistributionSpec law) {
  if (law.kind() != LawKind::DiscreteSymmetric) return law;

  const auto atoms = law.atoms();
  double total = 0.0;
  for (const Atom& atom : atoms) total += atom.probability;
  if (std::abs(total - 1.0) > kTolerance) {
    throw NormalizationError("discrete law: probabilities sum to " + std::to_string(total));
  }
  const double mean = law.moment(1);
  if (std::abs(mean) > kTolerance) {
    throw NormalizationError("discrete law: mean is " + std::to_string(mean) + ", expected 0");
  }
  // Atoms are sorted by value, so mirror pairs meet from both ends.
  for (std::size_t lo = 0; lo < atoms.size(); ++lo) {
    const Atom& left = atoms[lo];
    const Atom& right = atoms[atoms.size() - 1 - lo];
    if (std::abs(left.value + right.value) > kTolerance ||
        std::abs(left.probability - right.probability) > kTolerance) {
      throw AsymmetryError("discrete law: atom " + std::to_string(left.value) +
                           " has no mirror image with equal probability");
    }
  }
  const double variance = law.moment(2);
  if (std::abs(variance - 1.0) > kTolerance) {
    throw NormalizationError("discrete law: variance is " + std::to_string(variance) +
                             ", expected 1");
  }
  return law;
}

DistributionSpec parse_distribution(const std::string& text) {
  if (text == "gaussian" || text == "normal") return DistributionSpec::gaussian();
  if (text == "rademacher") return DistributionSpec::rademacher();
  if (text == "uniform") return DistributionSpec::uniform_symmetric();
  const std::string prefix = "discrete:";
  if (text.rfind(prefix, 0) != 0) {
    throw std::invalid_argument("unknown distribution '" + text +
                                "' (expected gaussian, rademacher, uniform or discrete:v:p,...)");
  }
  std::vector<Atom> atoms;
  std::stringstream list(text.substr(prefix.size()));
  std::string item;
  while (std::getline(list, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("discrete atom '" + item + "' must be value:probability");
    }
    try {
      atoms.push_back({std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
    } catch (const std::logic_error&) {
      throw std::invalid_argument("discrete atom '" + item + "' is not numeric");
    }
  }
  return validate_distribution(DistributionSpec::discrete(std::move(atoms)));
}

}  // namespace matprod
