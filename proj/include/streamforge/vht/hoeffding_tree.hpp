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
#include <memory>
#include <vector>

#include "streamforge/instance/schema.hpp"
#include "streamforge/instance/stream_source.hpp"
#include "streamforge/vht/tree.hpp"

namespace streamforge::vht {

/// Sequential Hoeffding tree: the tree model and its statistics table in one
/// place, split decisions taken synchronously.
class HoeffdingTree {
 public:
  HoeffdingTree(std::shared_ptr<const InstanceSchema> schema, VhtConfig config);

  std::size_t predict(const Instance& instance) const { return model_.predict(instance); }
  /// Ignores unlabelled instances.
  void train(const Instance& instance, std::uint64_t index = 0);

  const TreeModel& model() const noexcept { return model_; }
  const LocalStatisticsTable& table() const noexcept { return table_; }
  const std::vector<SplitDecision>& decisions() const noexcept { return decisions_; }
  const VhtConfig& config() const noexcept { return config_; }

 private:
  std::shared_ptr<const InstanceSchema> schema_;
  VhtConfig config_;
  TreeModel model_;
  LocalStatisticsTable table_;
  std::vector<SplitDecision> decisions_;
};

struct SequentialRun {
  std::uint64_t instances = 0;
  std::uint64_t correct = 0;
  double accuracy() const { return instances ? static_cast<double>(correct) / static_cast<double>(instances) : 0.0; }
};

/// Prequential test-then-train over `source` with no engine involved.
SequentialRun runSequential(HoeffdingTree& tree, StreamSource& source,
                            std::uint64_t maxInstances = UINT64_MAX);

}  // namespace streamforge::vht
