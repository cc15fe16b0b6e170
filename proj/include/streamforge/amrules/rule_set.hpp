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
#include <string>
#include <vector>

#include "streamforge/amrules/rule.hpp"

namespace streamforge::amrules {

/// One change to a rule set. `body` is the full body after the change
/// (empty for evictions).
struct RuleEvent {
  enum class Kind { Created, Expanded, Evicted };
  Kind kind = Kind::Created;
  std::uint64_t instanceIndex = 0;
  std::uint64_t ruleId = 0;
  std::vector<Feature> body;

  std::string toString() const;
  bool operator==(const RuleEvent&) const = default;
};

/// Unweighted mean of the covering rules' predictions, or `fallback` when
/// there are none.
double combinePredictions(const std::vector<double>& covering, double fallback);

/// Sequential AMRules.
///
/// Ordered mode trains the first covering rule that does not flag the
/// instance as anomalous; unordered mode trains every covering rule except
/// those flagging it. The default rule learns from instances no rule covers
/// (ordered mode: also those every covering rule rejected). When the default
/// rule expands it joins the rule set with the next id and a fresh default
/// rule takes its place.
class RuleSetModel {
 public:
  RuleSetModel(std::shared_ptr<const InstanceSchema> schema, AmrConfig config);

  double predict(const Instance& instance) const;
  void train(const Instance& instance, std::uint64_t index);

  const std::vector<Rule>& rules() const noexcept { return rules_; }
  const Rule& defaultRule() const noexcept { return default_; }
  const std::vector<RuleEvent>& log() const noexcept { return log_; }
  std::uint64_t rulesCreated() const noexcept { return nextId_; }
  std::uint64_t anomaliesSkipped() const noexcept { return anomalies_; }
  const AmrConfig& config() const noexcept { return config_; }
  /// Rule ids and bodies in order.
  std::string digest() const;

 private:
  void trainDefault(const Instance& instance, std::uint64_t index);

  std::shared_ptr<const InstanceSchema> schema_;
  AmrConfig config_;
  std::vector<Rule> rules_;
  Rule default_;
  std::uint64_t nextId_ = 0;
  std::uint64_t anomalies_ = 0;
  std::vector<RuleEvent> log_;
};

/// Renders rule ids and bodies, one rule per line.
std::string ruleListDigest(const std::vector<std::pair<std::uint64_t, std::vector<Feature>>>& rules);

}  // namespace streamforge::amrules
