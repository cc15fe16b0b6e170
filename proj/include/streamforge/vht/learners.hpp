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

#include <memory>
#include <optional>

#include "streamforge/eval/learner.hpp"
#include "streamforge/vht/processors.hpp"
#include "streamforge/vht/tree.hpp"

namespace streamforge::vht {

/// Model aggregator (parallelism 1) plus `config.parallelism` statistics
/// instances.
class VerticalHoeffdingTreeLearner final : public Learner {
 public:
  explicit VerticalHoeffdingTreeLearner(VhtConfig config);
  std::string name() const override { return "VerticalHoeffdingTree"; }
  void checkSchema(const InstanceSchema& schema) const override;
  std::vector<StreamHandle> build(TopologyBuilder& builder, std::shared_ptr<const InstanceSchema> schema,
                                  StreamHandle input) override;

  ProcessorHandle aggregator() const { return aggregator_.value(); }
  ProcessorHandle statistics() const { return statistics_.value(); }
  const VhtConfig& config() const noexcept { return config_; }

 private:
  VhtConfig config_;
  std::optional<ProcessorHandle> aggregator_;
  std::optional<ProcessorHandle> statistics_;
};

class LocalHoeffdingTreeLearner final : public Learner {
 public:
  explicit LocalHoeffdingTreeLearner(VhtConfig config);
  std::string name() const override { return "HoeffdingTreeLocal"; }
  void checkSchema(const InstanceSchema& schema) const override;
  std::vector<StreamHandle> build(TopologyBuilder& builder, std::shared_ptr<const InstanceSchema> schema,
                                  StreamHandle input) override;
  ProcessorHandle tree() const { return tree_.value(); }

 private:
  VhtConfig config_;
  std::optional<ProcessorHandle> tree_;
};

/// Horizontal baseline: `shards` sequential trees, each trained on a
/// round-robin share of the stream, predicting by majority vote.
class ShardingLearner final : public Learner {
 public:
  ShardingLearner(VhtConfig config, std::size_t shards);
  std::string name() const override { return "Sharding"; }
  void checkSchema(const InstanceSchema& schema) const override;
  std::vector<StreamHandle> build(TopologyBuilder& builder, std::shared_ptr<const InstanceSchema> schema,
                                  StreamHandle input) override;
  ProcessorHandle shards() const { return shards_.value(); }

 private:
  VhtConfig config_;
  std::size_t shardCount_;
  std::optional<ProcessorHandle> shards_;
};

}  // namespace streamforge::vht
