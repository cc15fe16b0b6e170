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

#include "streamforge/vht/statistics_table.hpp"

#include <algorithm>

namespace streamforge::vht {

bool ranksBefore(const Candidate& a, const Candidate& b) {
  if (a.merit != b.merit) return a.merit > b.merit;
  if (a.isNull() != b.isNull()) return a.isNull();
  return a.attribute < b.attribute;
}

LocalStatisticsTable::LocalStatisticsTable(std::shared_ptr<const InstanceSchema> schema)
    : schema_(std::move(schema)) {}

LocalStatisticsTable::LocalStatisticsTable(const LocalStatisticsTable& other) : schema_(other.schema_) {
  for (const auto& [id, stats] : other.leaves_) {
    LeafStats copy;
    copy.present = stats.present;
    copy.observers.resize(stats.observers.size());
    for (auto a : stats.present) copy.observers[a] = stats.observers[a]->clone();
    leaves_.emplace(id, std::move(copy));
  }
}

std::unique_ptr<AttributeObserver> LocalStatisticsTable::makeObserver(std::uint32_t attribute) const {
  const auto& spec = schema_->attribute(attribute);
  if (spec.isCategorical()) return std::make_unique<NominalObserver>(spec.valueCount());
  return std::make_unique<GaussianObserver>();
}

void LocalStatisticsTable::update(std::uint64_t leafId, std::uint32_t attribute, double value,
                                  std::size_t classIndex, double weight) {
  if (cached_ == nullptr || cachedId_ != leafId) {
    cached_ = &leaves_[leafId];
    cachedId_ = leafId;
  }
  LeafStats& stats = *cached_;
  if (stats.observers.size() <= attribute) stats.observers.resize(schema_->attributeCount());
  auto& obs = stats.observers[attribute];
  if (!obs) {
    obs = makeObserver(attribute);
    stats.present.push_back(attribute);
  }
  obs->observe(value, classIndex, weight);
}

LocalResult LocalStatisticsTable::compute(std::uint64_t leafId, std::span<const double> preSplit,
                                          SplitCriterion criterion, bool completeZeros) const {
  LocalResult result;
  result.leafId = leafId;
  auto it = leaves_.find(leafId);
  if (it == leaves_.end() || it->second.present.empty()) return result;
  result.empty = false;

  std::vector<Candidate> ranked{Candidate{}};
  std::vector<std::optional<SplitSuggestion>> suggestions;
  std::vector<std::uint32_t> order = it->second.present;
  std::sort(order.begin(), order.end());
  for (auto a : order) {
    const AttributeObserver* obs = it->second.observers[a].get();
    std::unique_ptr<AttributeObserver> completed;
    if (completeZeros) {
      auto mass = obs->classMass(preSplit.size());
      for (std::size_t k = 0; k < preSplit.size(); ++k) {
        const double gap = preSplit[k] - mass[k];
        if (gap > 1e-9 * std::max(1.0, preSplit[k])) {
          if (!completed) completed = obs->clone();
          completed->observe(0.0, k, gap);
        }
      }
      if (completed) obs = completed.get();
    }
    auto s = obs->bestSplit(a, criterion, preSplit);
    if (!s) continue;
    ranked.push_back(Candidate{a, s->merit});
    suggestions.push_back(std::move(s));
  }
  std::vector<std::size_t> idx(ranked.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return ranksBefore(ranked[x], ranked[y]); });
  result.best = ranked[idx[0]];
  result.second = idx.size() > 1 ? ranked[idx[1]] : Candidate{};
  if (!result.best.isNull()) result.bestSplit = std::move(suggestions[idx[0] - 1]);
  return result;
}

void LocalStatisticsTable::drop(std::uint64_t leafId) {
  if (cached_ != nullptr && cachedId_ == leafId) cached_ = nullptr;
  leaves_.erase(leafId);
}

std::size_t LocalStatisticsTable::observerCount() const {
  std::size_t n = 0;
  for (const auto& [id, stats] : leaves_) n += stats.present.size();
  return n;
}

double LocalStatisticsTable::totalMass() const {
  double m = 0.0;
  for (const auto& [id, stats] : leaves_) {
    for (auto a : stats.present) m += stats.observers[a]->totalMass();
  }
  return m;
}

const AttributeObserver* LocalStatisticsTable::observer(std::uint64_t leafId, std::uint32_t attribute) const {
  auto it = leaves_.find(leafId);
  if (it == leaves_.end() || attribute >= it->second.observers.size()) return nullptr;
  return it->second.observers[attribute].get();
}

}  // namespace streamforge::vht
