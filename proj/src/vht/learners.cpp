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

#include "streamforge/vht/learners.hpp"

#include "streamforge/common/error.hpp"

namespace streamforge::vht {

namespace {

void requireClassification(const InstanceSchema& schema, const std::string& learner) {
  if (!schema.isClassification()) {
    throw ConfigError(learner + " needs a nominal class attribute; the stream target is numeric");
  }
}

}  // namespace

VerticalHoeffdingTreeLearner::VerticalHoeffdingTreeLearner(VhtConfig config) : config_(config) {
  config_.validate();
}

void VerticalHoeffdingTreeLearner::checkSchema(const InstanceSchema& schema) const {
  requireClassification(schema, name());
}

std::vector<StreamHandle> VerticalHoeffdingTreeLearner::build(TopologyBuilder& builder,
                                                              std::shared_ptr<const InstanceSchema> schema,
                                                              StreamHandle input) {
  checkSchema(*schema);
  auto ports = std::make_shared<VhtPorts>();
  auto ma = builder.addProcessor(std::make_shared<ModelAggregator>(schema, config_, ports), 1, "model-aggregator");
  auto ls = builder.addProcessor(std::make_shared<LocalStatistics>(schema, config_, ports), config_.parallelism,
                                 "local-statistics");
  auto attributes = builder.createStream(ma, "attribute");
  auto control = builder.createStream(ma, "control");
  auto predictions = builder.createStream(ma, "prediction");
  auto results = builder.createStream(ls, "local-result");
  ports->attributes = attributes.id;
  ports->control = control.id;
  ports->predictions = predictions.id;
  ports->results = results.id;
  builder.connectInputShuffle(ma, input);
  builder.connectInputShuffle(ma, results);
  builder.connectInputKey(ls, attributes);
  builder.connectInputAll(ls, control);
  aggregator_ = ma;
  statistics_ = ls;
  return {predictions};
}

LocalHoeffdingTreeLearner::LocalHoeffdingTreeLearner(VhtConfig config) : config_(config) { config_.validate(); }

void LocalHoeffdingTreeLearner::checkSchema(const InstanceSchema& schema) const {
  requireClassification(schema, name());
}

std::vector<StreamHandle> LocalHoeffdingTreeLearner::build(TopologyBuilder& builder,
                                                           std::shared_ptr<const InstanceSchema> schema,
                                                           StreamHandle input) {
  checkSchema(*schema);
  auto port = std::make_shared<StreamId>(0);
  auto tree = builder.addProcessor(std::make_shared<LocalTreeProcessor>(schema, config_, port), 1, "local-tree");
  auto predictions = builder.createStream(tree, "prediction");
  *port = predictions.id;
  builder.connectInputShuffle(tree, input);
  tree_ = tree;
  return {predictions};
}

ShardingLearner::ShardingLearner(VhtConfig config, std::size_t shards) : config_(config), shardCount_(shards) {
  config_.validate();
  if (shards < 1) throw ConfigError("sharding needs at least one shard");
}

void ShardingLearner::checkSchema(const InstanceSchema& schema) const { requireClassification(schema, name()); }

std::vector<StreamHandle> ShardingLearner::build(TopologyBuilder& builder, std::shared_ptr<const InstanceSchema> schema,
                                                 StreamHandle input) {
  checkSchema(*schema);
  auto ports = std::make_shared<ShardPorts>();
  auto dist = builder.addProcessor(std::make_shared<ShardDistributor>(ports), 1, "shard-distributor");
  auto shards = builder.addProcessor(std::make_shared<ShardTree>(schema, config_, ports), shardCount_, "shard");
  auto combiner = builder.addProcessor(
      std::make_shared<VoteCombiner>(shardCount_, schema->classCount(), ports), 1, "vote-combiner");
  auto train = builder.createStream(dist, "train");
  auto test = builder.createStream(dist, "test");
  auto votes = builder.createStream(shards, "vote");
  auto predictions = builder.createStream(combiner, "prediction");
  ports->train = train.id;
  ports->test = test.id;
  ports->votes = votes.id;
  ports->predictions = predictions.id;
  builder.connectInputShuffle(dist, input);
  builder.connectInputShuffle(shards, train);
  builder.connectInputAll(shards, test);
  builder.connectInputShuffle(combiner, votes);
  shards_ = shards;
  return {predictions};
}

}  // namespace streamforge::vht
