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

#include "streamforge/vht/processors.hpp"

#include <cmath>
#include <cstring>
#include <limits>

namespace streamforge::vht {

namespace {

double truthOf(const Instance& instance) {
  return instance.hasLabel() ? *instance.label() : std::numeric_limits<double>::quiet_NaN();
}

PredictionEvent predictionFor(const InstanceEvent& ev, std::size_t predicted) {
  return PredictionEvent{ev.index, truthOf(*ev.instance), static_cast<double>(predicted), ev.instance->weight()};
}

}  // namespace

std::string attributeKey(std::uint64_t leafId, std::uint32_t attribute) {
  std::string key(12, '\0');
  for (int b = 0; b < 8; ++b) key[b] = static_cast<char>((leafId >> (8 * b)) & 0xff);
  for (int b = 0; b < 4; ++b) key[8 + b] = static_cast<char>((attribute >> (8 * b)) & 0xff);
  return key;
}

ModelAggregator::ModelAggregator(std::shared_ptr<const InstanceSchema> schema, VhtConfig config,
                                 std::shared_ptr<const VhtPorts> ports)
    : schema_(std::move(schema)), config_(config), ports_(std::move(ports)), model_(schema_->classCount()) {
  config_.validate();
}

std::unique_ptr<Processor> ModelAggregator::clone() const {
  return std::make_unique<ModelAggregator>(schema_, config_, ports_);
}

void ModelAggregator::process(const ContentEvent& event, Emitter& out) {
  if (event.isTerminal()) return;
  if (const auto* ev = event.as<InstanceEvent>()) {
    onInstance(*ev, out);
  } else if (const auto* r = event.as<LocalResultEvent>()) {
    onResult(*r, out);
  }
}

void ModelAggregator::onInstance(const InstanceEvent& ev, Emitter& out) {
  ++counters_.instances;
  const Instance& inst = *ev.instance;
  if (ev.testing) {
    out.emit(ports_->predictions, ContentEvent::of(predictionFor(ev, model_.predict(inst))));
  }
  if (ev.training && inst.hasLabel() && inst.weight() > 0.0) {
    LeafState& leaf = model_.sort(inst);
    if (!leaf.splitting) {
      learn(leaf, inst, ev.index, true, out);
    } else if (config_.buffering == Buffering::Wok) {
      ++counters_.discarded;
    } else {
      const std::uint64_t id = leaf.id;
      learn(leaf, inst, ev.index, false, out);
      auto& p = pending_.at(id);
      if (p.buffer.size() < config_.bufferSize) {
        p.buffer.push_back(ev.instance);
        ++counters_.buffered;
      }
    }
  }
  const std::uint64_t timeout = config_.effectiveSplitTimeout();
  std::vector<std::uint64_t> expired;
  for (const auto& [id, p] : pending_) {
    if (counters_.instances - p.startedAt >= timeout) expired.push_back(id);
  }
  for (auto id : expired) resolve(id, true, out);
}

void ModelAggregator::learn(LeafState& leaf, const Instance& inst, std::uint64_t index, bool allowCheck,
                            Emitter& out) {
  const std::size_t cls = inst.classIndex();
  const double w = inst.weight();
  leaf.distribution[cls] += w;
  leaf.seen += w;
  leaf.sawSparse = leaf.sawSparse || inst.isSparse();
  const std::uint64_t id = leaf.id;
  inst.forEachStored([&](std::size_t a, double v) {
    if (isMissing(v)) return;
    const auto attr = static_cast<std::uint32_t>(a);
    out.emit(ports_->attributes,
             ContentEvent::keyed(attributeKey(id, attr),
                                 AttributeEvent{id, attr, static_cast<std::uint32_t>(cls), v, w}));
    ++counters_.attributeEvents;
    counters_.attributeMass += w;
  });
  if (!allowCheck || leaf.seen - leaf.seenAtLastCheck < config_.gracePeriod) return;
  leaf.seenAtLastCheck = leaf.seen;
  if (leaf.pure()) return;
  leaf.splitting = true;
  leaf.frozen = leaf.distribution;
  Pending p;
  p.preSplit = leaf.distribution;
  p.startedAt = counters_.instances;
  p.instanceIndex = index;
  pending_.emplace(id, std::move(p));
  out.emit(ports_->control, ContentEvent::of(ComputeEvent{id, leaf.distribution, leaf.sawSparse}));
}

void ModelAggregator::onResult(const LocalResultEvent& ev, Emitter& out) {
  auto it = pending_.find(ev.result.leafId);
  if (it == pending_.end()) {
    ++counters_.lateResults;
    return;
  }
  it->second.results.push_back(ev.result);
  if (it->second.results.size() >= config_.parallelism) resolve(ev.result.leafId, false, out);
}

void ModelAggregator::resolve(std::uint64_t leafId, bool timedOut, Emitter& out) {
  auto node = pending_.extract(leafId);
  Pending& p = node.mapped();
  const SplitSuggestion* chosen = nullptr;
  SplitDecision d = decideSplit(leafId, p.preSplit, p.results, config_, model_.classCount(), &chosen);
  d.timedOut = timedOut;
  d.instanceIndex = p.instanceIndex;
  if (timedOut) ++counters_.timeouts;
  decisions_.push_back(d);
  LeafState& leaf = model_.leaf(leafId);
  leaf.splitting = false;
  leaf.frozen.clear();
  if (d.outcome != SplitOutcome::Split || chosen == nullptr) return;
  model_.split(leafId, *chosen);
  ++counters_.drops;
  out.emit(ports_->control, ContentEvent::of(DropEvent{leafId}));
  for (const auto& inst : p.buffer) {
    ++counters_.replayed;
    learn(model_.sort(*inst), *inst, p.instanceIndex, true, out);
  }
}

LocalStatistics::LocalStatistics(std::shared_ptr<const InstanceSchema> schema, VhtConfig config,
                                 std::shared_ptr<const VhtPorts> ports)
    : schema_(schema), config_(config), ports_(std::move(ports)), table_(std::move(schema)) {}

void LocalStatistics::onCreate(std::size_t instanceId, std::size_t) {
  id_ = static_cast<std::uint32_t>(instanceId);
}

std::unique_ptr<Processor> LocalStatistics::clone() const {
  return std::make_unique<LocalStatistics>(schema_, config_, ports_);
}

void LocalStatistics::process(const ContentEvent& event, Emitter& out) {
  if (event.isTerminal()) return;
  if (const auto* a = event.as<AttributeEvent>()) {
    ++attributeEvents_;
    if (recordKeys_) seen_.emplace_back(a->leafId, a->attribute);
    table_.update(a->leafId, a->attribute, a->value, a->classIndex, a->weight);
  } else if (const auto* c = event.as<ComputeEvent>()) {
    LocalResultEvent r{table_.compute(c->leafId, c->preSplit, config_.criterion, c->completeZeros), id_};
    out.emit(ports_->results, ContentEvent::of(std::move(r)));
  } else if (const auto* d = event.as<DropEvent>()) {
    table_.drop(d->leafId);
  }
}

LocalTreeProcessor::LocalTreeProcessor(std::shared_ptr<const InstanceSchema> schema, VhtConfig config,
                                       std::shared_ptr<const StreamId> predictions)
    : schema_(schema), predictions_(std::move(predictions)), tree_(std::move(schema), config) {}

std::unique_ptr<Processor> LocalTreeProcessor::clone() const {
  return std::make_unique<LocalTreeProcessor>(schema_, tree_.config(), predictions_);
}

void LocalTreeProcessor::process(const ContentEvent& event, Emitter& out) {
  if (event.isTerminal()) return;
  const auto* ev = event.as<InstanceEvent>();
  if (!ev) return;
  if (ev->testing) out.emit(*predictions_, ContentEvent::of(predictionFor(*ev, tree_.predict(*ev->instance))));
  if (ev->training) tree_.train(*ev->instance, ev->index);
}

void ShardDistributor::process(const ContentEvent& event, Emitter& out) {
  if (event.isTerminal()) return;
  const auto* ev = event.as<InstanceEvent>();
  if (!ev) return;
  if (ev->testing) out.emit(ports_->test, ContentEvent::of(InstanceEvent{ev->instance, ev->index, true, false}));
  if (ev->training) out.emit(ports_->train, ContentEvent::of(InstanceEvent{ev->instance, ev->index, false, true}));
}

ShardTree::ShardTree(std::shared_ptr<const InstanceSchema> schema, VhtConfig config,
                     std::shared_ptr<const ShardPorts> ports)
    : schema_(schema), ports_(std::move(ports)), tree_(std::move(schema), config) {}

std::unique_ptr<Processor> ShardTree::clone() const {
  return std::make_unique<ShardTree>(schema_, tree_.config(), ports_);
}

void ShardTree::process(const ContentEvent& event, Emitter& out) {
  if (event.isTerminal()) return;
  const auto* ev = event.as<InstanceEvent>();
  if (!ev) return;
  if (ev->testing) out.emit(ports_->votes, ContentEvent::of(predictionFor(*ev, tree_.predict(*ev->instance))));
  if (ev->training) tree_.train(*ev->instance, ev->index);
}

VoteCombiner::VoteCombiner(std::size_t shards, std::size_t classCount, std::shared_ptr<const ShardPorts> ports)
    : shards_(shards), classCount_(classCount), ports_(std::move(ports)) {}

std::unique_ptr<Processor> VoteCombiner::clone() const {
  return std::make_unique<VoteCombiner>(shards_, classCount_, ports_);
}

std::size_t VoteCombiner::combine(const std::vector<std::size_t>& votes, std::size_t classCount) {
  std::vector<double> counts(classCount, 0.0);
  for (auto v : votes) {
    if (v < classCount) counts[v] += 1.0;
  }
  return majorityClass(counts);
}

void VoteCombiner::process(const ContentEvent& event, Emitter& out) {
  if (event.isTerminal()) return;
  const auto* vote = event.as<PredictionEvent>();
  if (!vote) return;
  auto& ballot = open_[vote->index];
  if (ballot.received == 0) {
    ballot.counts.assign(classCount_, 0.0);
    ballot.first = *vote;
  }
  const auto cls = static_cast<std::size_t>(vote->prediction);
  if (cls < classCount_) ballot.counts[cls] += 1.0;
  if (++ballot.received < shards_) return;
  PredictionEvent combined = ballot.first;
  combined.prediction = static_cast<double>(majorityClass(ballot.counts));
  open_.erase(vote->index);
  out.emit(ports_->predictions, ContentEvent::of(combined));
}

}  // namespace streamforge::vht
