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

#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "streamforge/engine/engine.hpp"
#include "streamforge/eval/learner.hpp"
#include "streamforge/eval/metrics.hpp"
#include "streamforge/instance/stream_source.hpp"

namespace streamforge {

/// Entrance processor emitting InstanceEvents (test and train) from a
/// freshly created source.
class SourceProcessor final : public EntranceProcessor {
 public:
  SourceProcessor(SourceFactory factory, std::uint64_t maxInstances, std::shared_ptr<const StreamId> output);

  void onCreate(std::size_t instanceId, std::size_t total) override;
  bool produce(Emitter& out) override;
  std::unique_ptr<Processor> clone() const override;

 private:
  SourceFactory factory_;
  std::uint64_t maxInstances_;
  std::shared_ptr<const StreamId> output_;
  std::unique_ptr<StreamSource> source_;
  std::uint64_t emitted_ = 0;
};

/// Aggregates PredictionEvents into cumulative metrics and emits a report
/// row every `frequency` labelled predictions and at end of stream.
class EvaluatorProcessor final : public Processor {
 public:
  EvaluatorProcessor(std::shared_ptr<const InstanceSchema> schema, std::uint64_t frequency);

  void process(const ContentEvent& event, Emitter& out) override;
  std::unique_ptr<Processor> clone() const override;

  const std::vector<ReportRow>& rows() const noexcept { return rows_; }
  const MetricWindow& window() const noexcept { return window_; }

 private:
  void report();

  std::shared_ptr<const InstanceSchema> schema_;
  std::uint64_t frequency_;
  MetricWindow window_;
  std::vector<ReportRow> rows_;
  std::optional<std::chrono::steady_clock::time_point> start_;
};

struct PrequentialConfig {
  SourceFactory source;
  std::shared_ptr<Learner> learner;
  std::uint64_t frequency = 100000;
  std::uint64_t maxInstances = std::numeric_limits<std::uint64_t>::max();
};

/// Test-then-train evaluation: source -> learner sub-topology -> evaluator.
class PrequentialTask final : public Task {
 public:
  explicit PrequentialTask(PrequentialConfig config);

  std::string name() const override { return "PrequentialEvaluation"; }
  /// Throws ConfigError when the learner rejects the source schema.
  Topology buildTopology() override;

  const std::shared_ptr<const InstanceSchema>& schema() const noexcept { return schema_; }
  ProcessorHandle evaluator() const { return evaluator_.value(); }
  Learner& learner() const { return *config_.learner; }

 private:
  PrequentialConfig config_;
  std::shared_ptr<const InstanceSchema> schema_;
  std::optional<ProcessorHandle> evaluator_;
};

struct PrequentialResult {
  std::vector<ReportRow> rows;
  RunReport run;
  bool classification = true;
};

/// Builds and runs the task. `inspect` sees the engine after the run.
PrequentialResult runPrequential(PrequentialTask& task, const EngineConfig& config,
                                 const std::function<void(Engine&)>& inspect = {});

}  // namespace streamforge
