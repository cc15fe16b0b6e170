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
#include <vector>

#include "streamforge/amrules/rule_set.hpp"
#include "streamforge/eval/learner.hpp"
#include "streamforge/topology/processor.hpp"

namespace streamforge::amrules {

/// Aggregator -> learner owning `ruleId`, keyed by ruleId.
struct ForwardEvent {
  std::uint64_t ruleId = 0;
  std::shared_ptr<const Instance> instance;
  std::uint64_t index = 0;
};

/// A rule promoted from the default rule, with its full learning state.
struct NewRuleEvent {
  std::uint64_t index = 0;
  std::shared_ptr<const Rule> rule;
};

/// Learner -> aggregators after a rule gained `feature`.
struct ExpansionEvent {
  std::uint64_t ruleId = 0;
  Feature feature;
  Head head;
  std::uint64_t index = 0;
};

/// Learner -> aggregators after a drift alarm.
struct RemoveRuleEvent {
  std::uint64_t ruleId = 0;
  std::uint64_t index = 0;
};

/// Refreshed head for the aggregators' copy of a rule (Rule::kDefaultId for
/// the default rule).
struct HeadEvent {
  std::uint64_t ruleId = 0;
  Head head;
};

/// 8-byte little-endian routing key of a rule id.
std::string ruleKey(std::uint64_t ruleId);

struct AmrPorts {
  /// Aggregator -> learners, key grouping: forwards and new rules.
  StreamId forward = 0;
  /// Aggregator -> default-rule learner (HAMR).
  StreamId uncovered = 0;
  StreamId predictions = 0;
  /// Learners -> aggregators, all grouping.
  StreamId feedback = 0;
  /// Default-rule learner -> aggregators, all grouping (HAMR).
  StreamId announcements = 0;
  /// Default-rule learner -> learners, key grouping (HAMR).
  StreamId assignments = 0;
};

struct RuleAggregatorCounters {
  std::uint64_t instances = 0;
  std::uint64_t forwarded = 0;
  std::uint64_t uncovered = 0;
  std::uint64_t staleFeedback = 0;
  std::uint64_t duplicateRules = 0;
};

/// Holds body and head copies of the rules, predicts, and forwards training
/// instances to the learners owning the covering rules. With `ownsDefault`
/// (VAMR) it also learns the default rule and creates rules; otherwise
/// (HAMR) uncovered instances go to the default-rule learner.
class RuleAggregator final : public Processor {
 public:
  RuleAggregator(std::shared_ptr<const InstanceSchema> schema, AmrConfig config,
                 std::shared_ptr<const AmrPorts> ports, bool ownsDefault);

  void process(const ContentEvent& event, Emitter& out) override;
  std::unique_ptr<Processor> clone() const override;

  std::vector<std::uint64_t> ruleIds() const;
  std::string digest() const;
  const std::vector<RuleEvent>& log() const noexcept { return log_; }
  const RuleAggregatorCounters& counters() const noexcept { return counters_; }

 private:
  struct Replica {
    std::vector<Feature> body;
    Head head;
  };
  void onInstance(const InstanceEvent& ev, Emitter& out);
  void addRule(std::uint64_t index, const Rule& rule);
  double predict(const Instance& instance) const;

  std::shared_ptr<const InstanceSchema> schema_;
  AmrConfig config_;
  std::shared_ptr<const AmrPorts> ports_;
  bool ownsDefault_;
  std::map<std::uint64_t, Replica> rules_;
  std::optional<Rule> default_;
  Head defaultHead_;
  std::uint64_t nextId_ = 0;
  std::vector<RuleEvent> log_;
  RuleAggregatorCounters counters_;
};

struct RuleLearnerCounters {
  std::uint64_t updates = 0;
  std::uint64_t unknownRule = 0;
  std::uint64_t notCovered = 0;
  std::uint64_t anomalies = 0;
};

/// Owns the full statistics of the rules hashed to it.
class RuleLearner final : public Processor {
 public:
  RuleLearner(AmrConfig config, std::shared_ptr<const AmrPorts> ports);

  void process(const ContentEvent& event, Emitter& out) override;
  std::unique_ptr<Processor> clone() const override;

  const std::map<std::uint64_t, Rule>& rules() const noexcept { return rules_; }
  const RuleLearnerCounters& counters() const noexcept { return counters_; }
  /// Rule ids forwarded to this instance, for ownership checks.
  const std::vector<std::uint64_t>& forwardedIds() const noexcept { return forwardedIds_; }
  void recordForwards(bool on) { recordForwards_ = on; }

 private:
  AmrConfig config_;
  std::shared_ptr<const AmrPorts> ports_;
  std::map<std::uint64_t, Rule> rules_;
  RuleLearnerCounters counters_;
  bool recordForwards_ = false;
  std::vector<std::uint64_t> forwardedIds_;
};

/// HAMR default-rule learner: the single point where rules are created.
class DefaultRuleLearner final : public Processor {
 public:
  DefaultRuleLearner(std::shared_ptr<const InstanceSchema> schema, AmrConfig config,
                     std::shared_ptr<const AmrPorts> ports);

  void process(const ContentEvent& event, Emitter& out) override;
  std::unique_ptr<Processor> clone() const override;

  std::uint64_t rulesCreated() const noexcept { return nextId_; }

 private:
  std::shared_ptr<const InstanceSchema> schema_;
  AmrConfig config_;
  std::shared_ptr<const AmrPorts> ports_;
  Rule default_;
  std::uint64_t nextId_ = 0;
};

/// Sequential AMRules as a single processor.
class LocalRulesProcessor final : public Processor {
 public:
  LocalRulesProcessor(std::shared_ptr<const InstanceSchema> schema, AmrConfig config,
                      std::shared_ptr<const StreamId> predictions);

  void process(const ContentEvent& event, Emitter& out) override;
  std::unique_ptr<Processor> clone() const override;

  const RuleSetModel& model() const noexcept { return model_; }

 private:
  std::shared_ptr<const InstanceSchema> schema_;
  std::shared_ptr<const StreamId> predictions_;
  RuleSetModel model_;
};

}  // namespace streamforge::amrules
