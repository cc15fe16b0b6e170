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

#include "streamforge/eval/prequential.hpp"

#include <cmath>

#include "streamforge/common/error.hpp"

namespace streamforge {

SourceProcessor::SourceProcessor(SourceFactory factory, std::uint64_t maxInstances,
                                 std::shared_ptr<const StreamId> output)
    : factory_(std::move(factory)), maxInstances_(maxInstances), output_(std::move(output)) {}

void SourceProcessor::onCreate(std::size_t, std::size_t) { source_ = factory_(); }

std::unique_ptr<Processor> SourceProcessor::clone() const {
  return std::make_unique<SourceProcessor>(factory_, maxInstances_, output_);
}

bool SourceProcessor::produce(Emitter& out) {
  if (emitted_ >= maxInstances_ || !source_) return false;
  auto inst = source_->next();
  if (!inst) return false;
  out.emit(*output_, ContentEvent::of(
                         InstanceEvent{std::make_shared<const Instance>(std::move(*inst)), emitted_, true, true}));
  ++emitted_;
  return true;
}

EvaluatorProcessor::EvaluatorProcessor(std::shared_ptr<const InstanceSchema> schema, std::uint64_t frequency)
    : schema_(std::move(schema)), frequency_(frequency) {
  if (frequency_ < 1) throw ConfigError("reporting frequency must be at least 1");
}

std::unique_ptr<Processor> EvaluatorProcessor::clone() const {
  return std::make_unique<EvaluatorProcessor>(schema_, frequency_);
}

void EvaluatorProcessor::process(const ContentEvent& event, Emitter&) {
  if (event.isTerminal()) {
    if (window_.instancesSeen > 0 && (rows_.empty() || rows_.back().instances != window_.instancesSeen)) report();
    return;
  }
  const auto* p = event.as<PredictionEvent>();
  if (!p || std::isnan(p->truth)) return;
  if (!start_) start_ = std::chrono::steady_clock::now();
  if (schema_->isClassification()) {
    window_.addClassification(static_cast<std::size_t>(p->truth), static_cast<std::size_t>(p->prediction),
                              p->weight);
  } else {
    window_.addRegression(p->truth, p->prediction, p->weight, schema_->targetRange());
  }
  if (window_.instancesSeen % frequency_ == 0) report();
}

void EvaluatorProcessor::report() {
  auto values = computeMetrics(window_, *schema_);
  ReportRow row;
  row.instances = window_.instancesSeen;
  row.first = values.first;
  row.second = values.second;
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - *start_).count();
  row.throughput = row.seconds > 0 ? static_cast<double>(row.instances) / row.seconds : 0.0;
  rows_.push_back(row);
}

PrequentialTask::PrequentialTask(PrequentialConfig config) : config_(std::move(config)) {
  if (!config_.source) throw ConfigError("prequential task needs a source");
  if (!config_.learner) throw ConfigError("prequential task needs a learner");
  if (config_.frequency < 1) throw ConfigError("reporting frequency must be at least 1");
}

Topology PrequentialTask::buildTopology() {
  auto probe = config_.source();
  schema_ = std::make_shared<const InstanceSchema>(probe->schema());
  probe.reset();
  config_.learner->checkSchema(*schema_);
  TopologyBuilder builder(name());
  auto output = std::make_shared<StreamId>(0);
  auto src = builder.addProcessor(std::make_shared<SourceProcessor>(config_.source, config_.maxInstances, output), 1,
                                  "source");
  auto instances = builder.createStream(src, "instance");
  *output = instances.id;
  auto predictions = config_.learner->build(builder, schema_, instances);
  auto evaluator = builder.addProcessor(std::make_shared<EvaluatorProcessor>(schema_, config_.frequency), 1,
                                        "evaluator");
  for (auto p : predictions) builder.connectInputShuffle(evaluator, p);
  evaluator_ = evaluator;
  return builder.build();
}

PrequentialResult runPrequential(PrequentialTask& task, const EngineConfig& config,
                                 const std::function<void(Engine&)>& inspect) {
  Engine engine(task.buildTopology(), config);
  PrequentialResult result;
  result.run = engine.run();
  result.rows = engine.instanceAs<EvaluatorProcessor>(task.evaluator(), 0).rows();
  result.classification = task.schema()->isClassification();
  if (inspect) inspect(engine);
  return result;
}

}  // namespace streamforge
