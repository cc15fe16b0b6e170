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

#include "streamforge/amrules/learners.hpp"

#include "streamforge/common/error.hpp"

namespace streamforge::amrules {

namespace {

void requireRegression(const InstanceSchema& schema, const std::string& learner) {
  if (schema.isClassification()) {
    throw ConfigError(learner + " needs a numeric target; the stream target is nominal");
  }
}

}  // namespace

AmrulesLocalLearner::AmrulesLocalLearner(AmrConfig config) : config_(config) { config_.validate(); }

void AmrulesLocalLearner::checkSchema(const InstanceSchema& schema) const { requireRegression(schema, name()); }

std::vector<StreamHandle> AmrulesLocalLearner::build(TopologyBuilder& builder,
                                                     std::shared_ptr<const InstanceSchema> schema,
                                                     StreamHandle input) {
  checkSchema(*schema);
  auto port = std::make_shared<StreamId>(0);
  auto model = builder.addProcessor(std::make_shared<LocalRulesProcessor>(schema, config_, port), 1, "local-rules");
  auto predictions = builder.createStream(model, "prediction");
  *port = predictions.id;
  builder.connectInputShuffle(model, input);
  model_ = model;
  return {predictions};
}

VamrLearner::VamrLearner(AmrConfig config) : config_(config) { config_.validate(); }

void VamrLearner::checkSchema(const InstanceSchema& schema) const { requireRegression(schema, name()); }

std::vector<StreamHandle> VamrLearner::build(TopologyBuilder& builder, std::shared_ptr<const InstanceSchema> schema,
                                             StreamHandle input) {
  checkSchema(*schema);
  auto ports = std::make_shared<AmrPorts>();
  auto ma = builder.addProcessor(std::make_shared<RuleAggregator>(schema, config_, ports, true), 1,
                                 "model-aggregator");
  auto ls = builder.addProcessor(std::make_shared<RuleLearner>(config_, ports), config_.learners, "rule-learner");
  auto forward = builder.createStream(ma, "forward");
  auto predictions = builder.createStream(ma, "prediction");
  auto feedback = builder.createStream(ls, "feedback");
  ports->forward = forward.id;
  ports->predictions = predictions.id;
  ports->feedback = feedback.id;
  builder.connectInputShuffle(ma, input);
  builder.connectInputShuffle(ma, feedback);
  builder.connectInputKey(ls, forward);
  aggregator_ = ma;
  learners_ = ls;
  return {predictions};
}

HamrLearner::HamrLearner(AmrConfig config) : config_(config) { config_.validate(); }

void HamrLearner::checkSchema(const InstanceSchema& schema) const { requireRegression(schema, name()); }

std::vector<StreamHandle> HamrLearner::build(TopologyBuilder& builder, std::shared_ptr<const InstanceSchema> schema,
                                             StreamHandle input) {
  checkSchema(*schema);
  auto ports = std::make_shared<AmrPorts>();
  auto ma = builder.addProcessor(std::make_shared<RuleAggregator>(schema, config_, ports, false),
                                 config_.aggregators, "model-aggregator");
  auto ls = builder.addProcessor(std::make_shared<RuleLearner>(config_, ports), config_.learners, "rule-learner");
  auto dl = builder.addProcessor(std::make_shared<DefaultRuleLearner>(schema, config_, ports), 1,
                                 "default-rule-learner");
  auto forward = builder.createStream(ma, "forward");
  auto uncovered = builder.createStream(ma, "uncovered");
  auto predictions = builder.createStream(ma, "prediction");
  auto feedback = builder.createStream(ls, "feedback");
  auto announcements = builder.createStream(dl, "announcement");
  auto assignments = builder.createStream(dl, "assignment");
  ports->forward = forward.id;
  ports->uncovered = uncovered.id;
  ports->predictions = predictions.id;
  ports->feedback = feedback.id;
  ports->announcements = announcements.id;
  ports->assignments = assignments.id;
  builder.connectInputShuffle(ma, input);
  builder.connectInputAll(ma, feedback);
  builder.connectInputAll(ma, announcements);
  builder.connectInputKey(ls, forward);
  builder.connectInputKey(ls, assignments);
  builder.connectInputShuffle(dl, uncovered);
  aggregators_ = ma;
  learners_ = ls;
  default_ = dl;
  return {predictions};
}

}  // namespace streamforge::amrules
