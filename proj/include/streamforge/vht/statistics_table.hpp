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

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "streamforge/instance/schema.hpp"
#include "streamforge/vht/observers.hpp"

namespace streamforge::vht {

/// One entry of a top-2 ranking. The null attribute stands for the
/// no-split option, whose merit is 0.
struct Candidate {
  static constexpr std::uint32_t kNull = std::numeric_limits<std::uint32_t>::max();
  std::uint32_t attribute = kNull;
  double merit = 0.0;

  bool isNull() const noexcept { return attribute == kNull; }
  bool operator==(const Candidate&) const = default;
};

/// Total order used everywhere a best attribute is chosen: higher merit
/// first, the no-split option before attributes of equal merit, then lower
/// attribute id.
bool ranksBefore(const Candidate& a, const Candidate& b);

/// Answer of one statistics partition to a split request.
struct LocalResult {
  std::uint64_t leafId = 0;
  /// True when the partition holds no statistics for the leaf.
  bool empty = true;
  Candidate best;
  Candidate second;
  /// Split test and branch distributions of `best` when it is an attribute.
  std::optional<SplitSuggestion> bestSplit;
};

/// Observers keyed by (leafId, attributeId), created lazily.
class LocalStatisticsTable {
 public:
  explicit LocalStatisticsTable(std::shared_ptr<const InstanceSchema> schema);
  LocalStatisticsTable(const LocalStatisticsTable& other);
  LocalStatisticsTable& operator=(const LocalStatisticsTable&) = delete;

  void update(std::uint64_t leafId, std::uint32_t attribute, double value, std::size_t classIndex,
              double weight);

  /// Top-2 local candidates for the leaf. With `completeZeros`, mass missing
  /// from an observer relative to `preSplit` is treated as observed zeros
  /// (attributes absent from sparse instances).
  LocalResult compute(std::uint64_t leafId, std::span<const double> preSplit,
                      SplitCriterion criterion, bool completeZeros) const;

  void drop(std::uint64_t leafId);

  bool contains(std::uint64_t leafId) const { return leaves_.count(leafId) != 0; }
  std::size_t leafCount() const noexcept { return leaves_.size(); }
  std::size_t observerCount() const;
  /// Sum of observer masses over all leaves and attributes.
  double totalMass() const;
  const AttributeObserver* observer(std::uint64_t leafId, std::uint32_t attribute) const;

 private:
  struct LeafStats {
    std::vector<std::unique_ptr<AttributeObserver>> observers;
    std::vector<std::uint32_t> present;
  };
  std::unique_ptr<AttributeObserver> makeObserver(std::uint32_t attribute) const;

  std::shared_ptr<const InstanceSchema> schema_;
  std::unordered_map<std::uint64_t, LeafStats> leaves_;
  std::uint64_t cachedId_ = 0;
  LeafStats* cached_ = nullptr;
};

}  // namespace streamforge::vht
