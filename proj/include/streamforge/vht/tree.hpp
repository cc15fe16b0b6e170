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
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "streamforge/instance/instance.hpp"
#include "streamforge/vht/observers.hpp"
#include "streamforge/vht/statistics_table.hpp"

namespace streamforge::vht {

enum class Buffering { Wok, Wk };

struct VhtConfig {
  static constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

  double delta = 1e-7;
  double tieThreshold = 0.05;
  double gracePeriod = 200;
  SplitCriterion criterion = SplitCriterion::InfoGain;
  Buffering buffering = Buffering::Wk;
  /// z of wk(z); kUnbounded buffers everything.
  std::size_t bufferSize = kUnbounded;
  std::size_t parallelism = 1;
  /// Instance events processed by the aggregator before a pending split is
  /// decided with the results received so far; 0 selects the default.
  std::uint64_t splitTimeout = 0;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
  std::uint64_t effectiveSplitTimeout() const;
};

struct LeafState {
  std::uint64_t id = 0;
  std::vector<double> distribution;
  double seen = 0.0;
  double seenAtLastCheck = 0.0;
  bool splitting = false;
  /// Distribution at the time the pending split was requested.
  std::vector<double> frozen;
  bool sawSparse = false;

  bool pure() const;
  /// Prediction distribution: frozen while splitting.
  const std::vector<double>& predictive() const { return splitting ? frozen : distribution; }
};

/// Majority class with ties to the lowest index; 0 for an empty distribution.
std::size_t majorityClass(std::span<const double> distribution);

/// Decision tree structure held by the model aggregator.
class TreeModel {
 public:
  explicit TreeModel(std::size_t classCount);

  /// Leaf reached by `instance`; a missing value follows the heaviest branch.
  LeafState& sort(const Instance& instance);
  const LeafState& sort(const Instance& instance) const;
  bool hasLeaf(std::uint64_t leafId) const { return leafNode_.count(leafId) != 0; }
  LeafState& leaf(std::uint64_t leafId);
  std::size_t predict(const Instance& instance) const;

  /// Replaces the leaf with an internal node testing `split.test`, with one
  /// fresh leaf per branch initialised from the branch distributions.
  /// Returns the new leaf ids in branch order.
  std::vector<std::uint64_t> split(std::uint64_t leafId, const SplitSuggestion& split);

  std::size_t classCount() const noexcept { return classCount_; }
  std::size_t leafCount() const noexcept { return leafNode_.size(); }
  std::size_t nodeCount() const noexcept { return nodes_.size(); }
  std::size_t internalCount() const noexcept { return nodes_.size() - leafNode_.size(); }
  std::size_t depth() const;
  /// Pre-order rendering of tests and leaf distributions, exact to the bit.
  std::string digest() const;

 private:
  struct Node {
    bool leaf = true;
    SplitTest test;
    std::vector<std::size_t> children;
    std::size_t heaviest = 0;
    LeafState state;
  };
  std::size_t descend(const Instance& instance) const;
  std::size_t newLeaf(std::vector<double> distribution);

  std::size_t classCount_;
  std::vector<Node> nodes_;
  std::unordered_map<std::uint64_t, std::size_t> leafNode_;
  std::uint64_t nextLeafId_ = 0;
};

enum class SplitOutcome { Split, NoSplit, PrePruned };

const char* outcomeName(SplitOutcome o) noexcept;

struct SplitDecision {
  std::uint64_t leafId = 0;
  Candidate best;
  Candidate second;
  double deltaG = 0.0;
  double epsilon = 0.0;
  double n = 0.0;
  SplitOutcome outcome = SplitOutcome::NoSplit;
  std::size_t results = 0;
  bool timedOut = false;
  /// Index of the instance whose processing triggered the decision.
  std::uint64_t instanceIndex = 0;
};

/// Merges local results into the global top-2 and applies the Hoeffding
/// test. `chosen` receives the winning split when the outcome is Split.
SplitDecision decideSplit(std::uint64_t leafId, std::span<const double> preSplit,
                          const std::vector<LocalResult>& results, const VhtConfig& config,
                          std::size_t classCount, const SplitSuggestion** chosen);

}  // namespace streamforge::vht
