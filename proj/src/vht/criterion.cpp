// Copyright 2026 The StreamForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "streamforge/vht/criterion.hpp"

#include <algorithm>
#include <cmath>

#include "streamforge/common/error.hpp"

namespace streamforge::vht {

double hoeffdingBound(double range, double delta, double n) {
  if (!(range > 0.0)) throw ConfigError("hoeffding bound range must be positive");
  if (!(delta > 0.0 && delta <= 1.0)) throw ConfigError("hoeffding bound delta must be in (0,1]");
  if (!(n > 0.0)) throw ConfigError("hoeffding bound needs a positive count");
  return std::sqrt(range * range * std::log(1.0 / delta) / (2.0 * n));
}

namespace {

double entropyOf(std::span<const double> counts, double total) {
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) {
      const double p = c / total;
      h -= p * std::log2(p);
    }
  }
  return h;
}

double sum(std::span<const double> counts) {
  double total = 0.0;
  for (double c : counts) total += c;
  return total;
}

}  // namespace

double entropy(std::span<const double> counts) {
  double total = 0.0;
  for (double c : counts) {
    if (c < 0.0) throw ConfigError("negative class count");
    total += c;
  }
  if (!(total > 0.0)) throw ConfigError("entropy of an empty distribution");
  return entropyOf(counts, total);
}

double branchEntropy(const std::vector<std::vector<double>>& branches) {
  double total = 0.0;
  std::vector<double> weights;
  weights.reserve(branches.size());
  for (const auto& b : branches) {
    weights.push_back(sum(b));
    total += weights.back();
  }
  if (!(total > 0.0)) return 0.0;
  double h = 0.0;
  for (std::size_t i = 0; i < branches.size(); ++i) {
    if (weights[i] > 0.0) h += weights[i] / total * entropyOf(branches[i], weights[i]);
  }
  return h;
}

double splitMerit(SplitCriterion criterion, std::span<const double> preSplit,
                  const std::vector<std::vector<double>>& postSplit) {
  const double total = sum(preSplit);
  if (!(total > 0.0)) return 0.0;
  const double gain = entropyOf(preSplit, total) - branchEntropy(postSplit);
  if (criterion == SplitCriterion::EntropyReduction) {
    const double norm = std::log2(static_cast<double>(std::max<std::size_t>(preSplit.size(), 2)));
    return gain / norm;
  }
  return gain;
}

double meritRange(SplitCriterion criterion, std::size_t classCount) {
  if (criterion == SplitCriterion::EntropyReduction) return 1.0;
  return std::log2(static_cast<double>(std::max<std::size_t>(classCount, 2)));
}

}  // namespace streamforge::vht
