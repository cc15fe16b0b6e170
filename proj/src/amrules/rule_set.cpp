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

#include "streamforge/amrules/rule_set.hpp"

namespace streamforge::amrules {

std::string RuleEvent::toString() const {
  const char* k = kind == Kind::Created ? "created" : kind == Kind::Expanded ? "expanded" : "evicted";
  std::string out = std::to_string(instanceIndex) + " " + k + " " + std::to_string(ruleId);
  if (kind != Kind::Evicted) out += " " + bodyString(body);
  return out;
}

double combinePredictions(const std::vector<double>& covering, double fallback) {
  if (covering.empty()) return fallback;
  double sum = 0.0;
  for (double p : covering) sum += p;
  return sum / static_cast<double>(covering.size());
}

std::string ruleListDigest(const std::vector<std::pair<std::uint64_t, std::vector<Feature>>>& rules) {
  std::string out;
  for (const auto& [id, body] : rules) out += std::to_string(id) + ": " + bodyString(body) + "\n";
  return out;
}

RuleSetModel::RuleSetModel(std::shared_ptr<const InstanceSchema> schema, AmrConfig config)
    : schema_(std::move(schema)), config_(config), default_(Rule::kDefaultId, schema_, config_) {
  config_.validate();
}

double RuleSetModel::predict(const Instance& instance) const {
  if (config_.ordered) {
    for (const auto& r : rules_) {
      if (r.covers(instance)) return r.predict(instance);
    }
    return default_.predict(instance);
  }
  std::vector<double> covering;
  for (const auto& r : rules_) {
    if (r.covers(instance)) covering.push_back(r.predict(instance));
  }
  return combinePredictions(covering, default_.predict(instance));
}

void RuleSetModel::train(const Instance& instance, std::uint64_t index) {
  if (!instance.hasLabel()) return;
  bool covered = false;
  bool trained = false;
  for (std::size_t i = 0; i < rules_.size();) {
    Rule& r = rules_[i];
    if (!r.covers(instance)) {
      ++i;
      continue;
    }
    covered = true;
    if (r.isAnomaly(instance)) {
      ++anomalies_;
      ++i;
      continue;
    }
    trained = true;
    RuleUpdate u = r.learn(instance);
    if (u.expansion) log_.push_back({RuleEvent::Kind::Expanded, index, r.id(), r.body()});
    if (u.evict) {
      log_.push_back({RuleEvent::Kind::Evicted, index, r.id(), {}});
      rules_.erase(rules_.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
    if (config_.ordered) break;
  }
  if (config_.ordered ? !trained : !covered) trainDefault(instance, index);
}

void RuleSetModel::trainDefault(const Instance& instance, std::uint64_t index) {
  RuleUpdate u = default_.learn(instance);
  if (!u.expansion) return;
  Rule promoted = std::move(default_);
  promoted.setId(nextId_++);
  log_.push_back({RuleEvent::Kind::Created, index, promoted.id(), promoted.body()});
  rules_.push_back(std::move(promoted));
  default_ = Rule(Rule::kDefaultId, schema_, config_);
}

std::string RuleSetModel::digest() const {
  std::vector<std::pair<std::uint64_t, std::vector<Feature>>> list;
  for (const auto& r : rules_) list.emplace_back(r.id(), r.body());
  return ruleListDigest(list);
}

}  // namespace streamforge::amrules
