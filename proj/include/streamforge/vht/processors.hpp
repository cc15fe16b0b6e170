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
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "streamforge/eval/learner.hpp"
#include "streamforge/topology/processor.hpp"
#include "streamforge/vht/hoeffding_tree.hpp"
#include "streamforge/vht/tree.hpp"

namespace streamforge::vht {

/// Aggregator -> statistics, key-grouped by (leafId, attribute).
struct AttributeEvent {
  std::uint64_t leafId = 0;
  std::uint32_t attribute = 0;
  std::uint32_t classIndex = 0;
  double value = 0.0;
  double weight = 1.0;
};

/// Aggregator -> all statistics instances.
struct ComputeEvent {
  std::uint64_t leafId = 0;
  std::vector<double> preSplit;
  bool completeZeros = false;
};

/// Statistics instance -> aggregator.
struct LocalResultEvent {
  LocalResult result;
  std::uint32_t from = 0;
};

/// Aggregator -> all statistics instances.
struct DropEvent {
  std::uint64_t leafId = 0;
};

/// 12-byte routing key: leafId then attribute id, little-endian.
std::string attributeKey(std::uint64_t leafId, std::uint32_t attribute);

struct VhtPorts {
  StreamId attributes = 0;
  StreamId control = 0;
  StreamId results = 0;
  StreamId predictions = 0;
};

struct AggregatorCounters {
  std::uint64_t instances = 0;
  std::uint64_t discarded = 0;
  std::uint64_t buffered = 0;
  std::uint64_t replayed = 0;
  std::uint64_t lateResults = 0;
  std::uint64_t timeouts = 0;
  std::uint64_t attributeEvents = 0;
  double attributeMass = 0.0;
  std::uint64_t drops = 0;
};

/// Holds the tree, sorts instances, emits attribute events and runs the
/// split protocol.
class ModelAggregator final : public Processor {
 public:
  ModelAggregator(std::shared_ptr<const InstanceSchema> schema, VhtConfig config,
                  std::shared_ptr<const VhtPorts> ports);

  void process(const ContentEvent& event, Emitter& out) override;
  std::unique_ptr<Processor> clone() const override;

  const TreeModel& model() const noexcept { return model_; }
  const std::vector<SplitDecision>& decisions() const noexcept { return decisions_; }
  const AggregatorCounters& counters() const noexcept { return counters_; }
  std::size_t pendingSplits() const noexcept { return pending_.size(); }

 private:
  struct Pending {
    std::vector<double> preSplit;
    std::vector<LocalResult> results;
    std::uint64_t startedAt = 0;
    std::uint64_t instanceIndex = 0;
    std::vector<std::shared_ptr<const Instance>> buffer;
  };

  void onInstance(const InstanceEvent& ev, Emitter& out);
  void onResult(const LocalResultEvent& ev, Emitter& out);
  void learn(LeafState& leaf, const Instance& instance, std::uint64_t index, bool allowCheck, Emitter& out);
  void resolve(std::uint64_t leafId, bool timedOut, Emitter& out);

  std::shared_ptr<const InstanceSchema> schema_;
  VhtConfig config_;
  std::shared_ptr<const VhtPorts> ports_;
  TreeModel model_;
  std::map<std::uint64_t, Pending> pending_;
  std::vector<SplitDecision> decisions_;
  AggregatorCounters counters_;
};

/// One partition of the statistics table.
class LocalStatistics final : public Processor {
 public:
  LocalStatistics(std::shared_ptr<const InstanceSchema> schema, VhtConfig config,
                  std::shared_ptr<const VhtPorts> ports);

  void onCreate(std::size_t instanceId, std::size_t total) override;
  void process(const ContentEvent& event, Emitter& out) override;
  std::unique_ptr<Processor> clone() const override;

  const LocalStatisticsTable& table() const noexcept { return table_; }
  std::uint64_t attributeEvents() const noexcept { return attributeEvents_; }
  /// (leafId, attribute) pairs seen here, for single-homing checks.
  const std::vector<std::pair<std::uint64_t, std::uint32_t>>& seenKeys() const noexcept { return seen_; }
  void recordKeys(bool on) { recordKeys_ = on; }

 private:
  std::shared_ptr<const InstanceSchema> schema_;
  VhtConfig config_;
  std::shared_ptr<const VhtPorts> ports_;
  LocalStatisticsTable table_;
  std::uint32_t id_ = 0;
  std::uint64_t attributeEvents_ = 0;
  bool recordKeys_ = false;
  std::vector<std::pair<std::uint64_t, std::uint32_t>> seen_;
};

/// Sequential Hoeffding tree as a single processor.
class LocalTreeProcessor final : public Processor {
 public:
  LocalTreeProcessor(std::shared_ptr<const InstanceSchema> schema, VhtConfig config,
                     std::shared_ptr<const StreamId> predictions);

  void process(const ContentEvent& event, Emitter& out) override;
  std::unique_ptr<Processor> clone() const override;

  const HoeffdingTree& tree() const noexcept { return tree_; }

 private:
  std::shared_ptr<const InstanceSchema> schema_;
  std::shared_ptr<const StreamId> predictions_;
  HoeffdingTree tree_;
};

struct ShardPorts {
  StreamId train = 0;
  StreamId test = 0;
  StreamId votes = 0;
  StreamId predictions = 0;
};

/// Splits each instance event into a train copy (shuffle) and a test copy
/// (broadcast).
class ShardDistributor final : public Processor {
 public:
  explicit ShardDistributor(std::shared_ptr<const ShardPorts> ports) : ports_(std::move(ports)) {}
  void process(const ContentEvent& event, Emitter& out) override;
  std::unique_ptr<Processor> clone() const override { return std::make_unique<ShardDistributor>(ports_); }

 private:
  std::shared_ptr<const ShardPorts> ports_;
};

class ShardTree final : public Processor {
 public:
  ShardTree(std::shared_ptr<const InstanceSchema> schema, VhtConfig config,
            std::shared_ptr<const ShardPorts> ports);
  void process(const ContentEvent& event, Emitter& out) override;
  std::unique_ptr<Processor> clone() const override;
  const HoeffdingTree& tree() const noexcept { return tree_; }

 private:
  std::shared_ptr<const InstanceSchema> schema_;
  std::shared_ptr<const ShardPorts> ports_;
  HoeffdingTree tree_;
};

/// Majority vote over the shards' predictions; ties go to the lowest class.
class VoteCombiner final : public Processor {
 public:
  VoteCombiner(std::size_t shards, std::size_t classCount, std::shared_ptr<const ShardPorts> ports);
  void process(const ContentEvent& event, Emitter& out) override;
  std::unique_ptr<Processor> clone() const override;

  /// Combines one vote vector; exposed for testing.
  static std::size_t combine(const std::vector<std::size_t>& votes, std::size_t classCount);

 private:
  struct Ballot {
    std::vector<double> counts;
    std::size_t received = 0;
    PredictionEvent first;
  };
  std::size_t shards_;
  std::size_t classCount_;
  std::shared_ptr<const ShardPorts> ports_;
  std::unordered_map<std::uint64_t, Ballot> open_;
};

}  // namespace streamforge::vht
