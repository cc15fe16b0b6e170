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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace streamforge::vht {

enum class SplitCriterion { InfoGain, EntropyReduction };

/// sqrt(R^2 ln(1/delta) / (2n)). Throws ConfigError unless R > 0,
/// 0 < delta <= 1 and n > 0.
double hoeffdingBound(double range, double delta, double n);

/// Shannon entropy in bits. Throws ConfigError for an all-zero or negative
/// distribution.
double entropy(std::span<const double> counts);

/// Weighted entropy of a set of branch distributions; empty branches are
/// ignored. Returns 0 when all branches are empty.
double branchEntropy(const std::vector<std::vector<double>>& branches);

/// H(pre) - branchEntropy(post), normalised by log2(classCount) for
/// EntropyReduction. Returns 0 for an empty parent.
double splitMerit(SplitCriterion criterion, std::span<const double> preSplit,
                  const std::vector<std::vector<double>>& postSplit);

/// Range R of the merit: log2(classCount) for InfoGain, 1 for EntropyReduction.
double meritRange(SplitCriterion criterion, std::size_t classCount);

}  // namespace streamforge::vht
