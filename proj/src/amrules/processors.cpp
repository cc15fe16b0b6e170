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

#include "streamforge/amrules/processors.hpp"

#include <cmath>
#include <limits>

namespace streamforge::amrules {

namespace {

PredictionEvent predictionFor(const InstanceEvent& ev, double predicted) {
  const Instance& x = *ev.instance;
  const double truth = x.hasLabel() ? *x.label() : std::numeric_limits<double>::quiet_NaN();
  return PredictionEvent{ev.index, truth, predicted, x.weight()};
}

bool trainable(const InstanceEvent& ev) {
  return ev.training && ev.instance->hasLabel() && ev.instance->weight() > 0.0;
}

}  // namespace

std::string ruleKey(std::uint64_t ruleId) {
  std::string key(8, '\0');
  for (int b = 0; b < 8; ++b) key[static_cast<std::size_t>(b)] = static_cast<char>((ruleId >> (8 * b)) & 0xff);
  return key;
}

RuleAggregator::RuleAggregator(std::shared_ptr<const InstanceSchema> schema, AmrConfig config,
                               std::shared_ptr<const AmrPorts> ports, bool ownsDefault)
    : schema_(std::move(schema)), config_(config), ports_(std::move(ports)), ownsDefault_(ownsDefault) {
  config_.validate();
  if (ownsDefault_) default_.emplace(Rule::kDefaultId, schema_, config_);
  defaultHead_ = Rule(Rule::kDefaultId, schema_, config_).head();
}

std::unique_ptr<Processor> RuleAggregator::clone() const {
  return std::make_unique<RuleAggregator>(schema_, config_, ports_, ownsDefault_);
}

double RuleAggregator::predict(const Instance& instance) const {
  const Head& fallback = default_ ? default_->head() : defaultHead_;
  if (config_.ordered) {
    for (const auto& [id, r] : rules_) {
      if (covers(r.body, instance)) return r.head.predict(instance);
    }
    return fallback.predict(instance);
  }
  std::vector<double> covering;
  for (const auto& [id, r] : rules_) {
    if (covers(r.body, instance)) covering.push_back(r.head.predict(instance));
  }
  return combinePredictions(covering, fallback.predict(instance));
}

void RuleAggregator::addRule(std::uint64_t index, const Rule& rule) {
  auto [it, inserted] = rules_.try_emplace(rule.id(), Replica{rule.body(), rule.head()});
  if (!inserted) {
    ++counters_.duplicateRules;
    return;
  }
  log_.push_back({RuleEvent::Kind::Created, index, rule.id(), rule.body()});
}

void RuleAggregator::onInstance(const InstanceEvent& ev, Emitter& out) {
  ++counters_.instances;
  const Instance& x = *ev.instance;
  if (ev.testing) out.emit(ports_->predictions, ContentEvent::of(predictionFor(ev, predict(x))));
  if (!trainable(ev)) return;
  bool covered = false;
  for (const auto& [id, r] : rules_) {
    if (!covers(r.body, x)) continue;
    covered = true;
    ++counters_.forwarded;
    out.emit(ports_->forward, ContentEvent::keyed(ruleKey(id), ForwardEvent{id, ev.instance, ev.index}));
    if (config_.ordered) break;
  }
  if (covered) return;
  ++counters_.uncovered;
  if (!ownsDefault_) {
    out.emit(ports_->uncovered, ContentEvent::of(InstanceEvent{ev.instance, ev.index, false, true}));
    return;
  }
  RuleUpdate u = default_->learn(x);
  if (!u.expansion) return;
  auto promoted = std::make_shared<Rule>(std::move(*default_));
  promoted->setId(nextId_++);
  default_.emplace(Rule::kDefaultId, schema_, config_);
  addRule(ev.index, *promoted);
  const std::uint64_t id = promoted->id();
  out.emit(ports_->forward, ContentEvent::keyed(ruleKey(id), NewRuleEvent{ev.index, std::move(promoted)}));
}

void RuleAggregator::process(const ContentEvent& event, Emitter& out) {
  if (event.isTerminal()) return;
  if (const auto* ev = event.as<InstanceEvent>()) {
    onInstance(*ev, out);
  } else if (const auto* n = event.as<NewRuleEvent>()) {
    addRule(n->index, *n->rule);
  } else if (const auto* e = event.as<ExpansionEvent>()) {
    auto it = rules_.find(e->ruleId);
    if (it == rules_.end()) {
      ++counters_.staleFeedback;
      return;
    }
    it->second.body.push_back(e->feature);
    it->second.head = e->head;
    log_.push_back({RuleEvent::Kind::Expanded, e->index, e->ruleId, it->second.body});
  } else if (const auto* r = event.as<RemoveRuleEvent>()) {
    if (rules_.erase(r->ruleId) == 0) {
      ++counters_.staleFeedback;
      return;
    }
    log_.push_back({RuleEvent::Kind::Evicted, r->index, r->ruleId, {}});
  } else if (const auto* h = event.as<HeadEvent>()) {
    if (h->ruleId == Rule::kDefaultId) {
      defaultHead_ = h->head;
    } else if (auto it = rules_.find(h->ruleId); it != rules_.end()) {
      it->second.head = h->head;
    }
  }
}

std::vector<std::uint64_t> RuleAggregator::ruleIds() const {
  std::vector<std::uint64_t> ids;
  for (const auto& [id, r] : rules_) ids.push_back(id);
  return ids;
}

std::string RuleAggregator::digest() const {
  std::vector<std::pair<std::uint64_t, std::vector<Feature>>> list;
  for (const auto& [id, r] : rules_) list.emplace_back(id, r.body);
  return ruleListDigest(list);
}

RuleLearner::RuleLearner(AmrConfig config, std::shared_ptr<const AmrPorts> ports)
    : config_(config), ports_(std::move(ports)) {}

std::unique_ptr<Processor> RuleLearner::clone() const { return std::make_unique<RuleLearner>(config_, ports_); }

void RuleLearner::process(const ContentEvent& event, Emitter& out) {
  if (event.isTerminal()) return;
  if (const auto* n = event.as<NewRuleEvent>()) {
    rules_.try_emplace(n->rule->id(), *n->rule);
    return;
  }
  const auto* f = event.as<ForwardEvent>();
  if (!f) return;
  if (recordForwards_) forwardedIds_.push_back(f->ruleId);
  auto it = rules_.find(f->ruleId);
  if (it == rules_.end()) {
    ++counters_.unknownRule;
    return;
  }
  Rule& rule = it->second;
  const Instance& x = *f->instance;
  // The aggregator may have routed with a body that has since grown.
  if (!rule.covers(x)) {
    ++counters_.notCovered;
    return;
  }
  if (rule.isAnomaly(x)) {
    ++counters_.anomalies;
    return;
  }
  ++counters_.updates;
  RuleUpdate u = rule.learn(x);
  if (u.evict) {
    out.emit(ports_->feedback, ContentEvent::of(RemoveRuleEvent{rule.id(), f->index}));
    rules_.erase(it);
    return;
  }
  if (u.expansion) {
    out.emit(ports_->feedback, ContentEvent::of(ExpansionEvent{rule.id(), *u.expansion, rule.head(), f->index}));
  } else if (rule.updates() % config_.headRefresh == 0) {
    out.emit(ports_->feedback, ContentEvent::of(HeadEvent{rule.id(), rule.head()}));
  }
}

DefaultRuleLearner::DefaultRuleLearner(std::shared_ptr<const InstanceSchema> schema, AmrConfig config,
                                       std::shared_ptr<const AmrPorts> ports)
    : schema_(schema), config_(config), ports_(std::move(ports)), default_(Rule::kDefaultId, schema, config) {}

std::unique_ptr<Processor> DefaultRuleLearner::clone() const {
  return std::make_unique<DefaultRuleLearner>(schema_, config_, ports_);
}

void DefaultRuleLearner::process(const ContentEvent& event, Emitter& out) {
  if (event.isTerminal()) return;
  const auto* ev = event.as<InstanceEvent>();
  if (!ev || !trainable(*ev)) return;
  RuleUpdate u = default_.learn(*ev->instance);
  if (!u.expansion) {
    if (default_.updates() % config_.headRefresh == 0) {
      out.emit(ports_->announcements, ContentEvent::of(HeadEvent{Rule::kDefaultId, default_.head()}));
    }
    return;
  }
  auto promoted = std::make_shared<Rule>(std::move(default_));
  promoted->setId(nextId_++);
  default_ = Rule(Rule::kDefaultId, schema_, config_);
  const std::uint64_t id = promoted->id();
  // The owning learner is told first so that, per channel, it knows the
  // rule before any aggregator can forward to it.
  out.emit(ports_->assignments, ContentEvent::keyed(ruleKey(id), NewRuleEvent{ev->index, promoted}));
  out.emit(ports_->announcements, ContentEvent::of(NewRuleEvent{ev->index, promoted}));
  out.emit(ports_->announcements, ContentEvent::of(HeadEvent{Rule::kDefaultId, default_.head()}));
}

LocalRulesProcessor::LocalRulesProcessor(std::shared_ptr<const InstanceSchema> schema, AmrConfig config,
                                         std::shared_ptr<const StreamId> predictions)
    : schema_(schema), predictions_(std::move(predictions)), model_(std::move(schema), config) {}

std::unique_ptr<Processor> LocalRulesProcessor::clone() const {
  return std::make_unique<LocalRulesProcessor>(schema_, model_.config(), predictions_);
}

void LocalRulesProcessor::process(const ContentEvent& event, Emitter& out) {
  if (event.isTerminal()) return;
  const auto* ev = event.as<InstanceEvent>();
  if (!ev) return;
  if (ev->testing) out.emit(*predictions_, ContentEvent::of(predictionFor(*ev, model_.predict(*ev->instance))));
  if (ev->training) model_.train(*ev->instance, ev->index);
}

}  // namespace streamforge::amrules
