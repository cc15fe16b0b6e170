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

#include "streamforge/vht/observers.hpp"

#include <algorithm>
#include <cmath>

namespace streamforge::vht {

std::optional<std::size_t> SplitTest::branch(const Instance& instance) const {
  const double v = instance.value(attribute);
  if (isMissing(v)) return std::nullopt;
  if (numeric) return v <= threshold ? 0 : 1;
  if (v < 0.0 || v >= static_cast<double>(branches)) return std::nullopt;
  return static_cast<std::size_t>(v);
}

NominalObserver::NominalObserver(std::size_t valueCount) : valueCount_(valueCount), counts_(valueCount) {}

void NominalObserver::observe(double value, std::size_t classIndex, double weight) {
  if (isMissing(value) || value < 0.0) return;
  const auto v = static_cast<std::size_t>(value);
  if (v >= valueCount_) return;
  auto& row = counts_[v];
  if (row.size() <= classIndex) row.resize(classIndex + 1, 0.0);
  row[classIndex] += weight;
  total_ += weight;
}

std::vector<double> NominalObserver::classMass(std::size_t classCount) const {
  std::vector<double> mass(classCount, 0.0);
  for (const auto& row : counts_) {
    for (std::size_t k = 0; k < row.size() && k < classCount; ++k) mass[k] += row[k];
  }
  return mass;
}

double NominalObserver::count(std::size_t value, std::size_t classIndex) const {
  if (value >= counts_.size() || classIndex >= counts_[value].size()) return 0.0;
  return counts_[value][classIndex];
}

std::optional<SplitSuggestion> NominalObserver::bestSplit(std::uint32_t attribute,
                                                          SplitCriterion criterion,
                                                          std::span<const double> preSplit) const {
  if (total_ <= 0.0) return std::nullopt;
  SplitSuggestion s;
  s.test = SplitTest{attribute, false, 0.0, valueCount_};
  s.branchDistributions.resize(valueCount_);
  for (std::size_t v = 0; v < valueCount_; ++v) {
    auto& dist = s.branchDistributions[v];
    dist.assign(preSplit.size(), 0.0);
    for (std::size_t k = 0; k < counts_[v].size() && k < dist.size(); ++k) dist[k] = counts_[v][k];
  }
  s.merit = splitMerit(criterion, preSplit, s.branchDistributions);
  return s;
}

void GaussianEstimator::add(double value, double w) {
  if (w <= 0.0) return;
  if (weight <= 0.0) {
    weight = w;
    mean = value;
    m2 = 0.0;
    return;
  }
  const double total = weight + w;
  const double delta = value - mean;
  mean += delta * w / total;
  m2 += w * delta * (value - mean);
  weight = total;
}

double GaussianEstimator::stddev() const { return std::sqrt(std::max(0.0, variance())); }

double GaussianEstimator::weightAtOrBelow(double value) const {
  const double sd = stddev();
  if (sd > 0.0) return weight * 0.5 * std::erfc(-(value - mean) / (sd * std::sqrt(2.0)));
  return value >= mean ? weight : 0.0;
}

void GaussianObserver::observe(double value, std::size_t classIndex, double weight) {
  if (isMissing(value) || weight <= 0.0) return;
  if (classes_.size() <= classIndex) classes_.resize(classIndex + 1);
  auto& c = classes_[classIndex];
  if (c.estimator.weight <= 0.0) {
    c.min = value;
    c.max = value;
  } else {
    c.min = std::min(c.min, value);
    c.max = std::max(c.max, value);
  }
  c.estimator.add(value, weight);
  total_ += weight;
}

std::vector<double> GaussianObserver::classMass(std::size_t classCount) const {
  std::vector<double> mass(classCount, 0.0);
  for (std::size_t k = 0; k < classes_.size() && k < classCount; ++k) mass[k] = classes_[k].estimator.weight;
  return mass;
}

std::vector<double> GaussianObserver::candidateThresholds() const {
  bool any = false;
  double lo = 0.0, hi = 0.0;
  for (const auto& c : classes_) {
    if (c.estimator.weight <= 0.0) continue;
    lo = any ? std::min(lo, c.min) : c.min;
    hi = any ? std::max(hi, c.max) : c.max;
    any = true;
  }
  std::vector<double> out;
  if (!any || !(hi > lo)) return out;
  const double step = (hi - lo) / static_cast<double>(kCandidates + 1);
  for (std::size_t i = 0; i < kCandidates; ++i) out.push_back(lo + step * static_cast<double>(i + 1));
  return out;
}

std::vector<std::vector<double>> GaussianObserver::binarySplit(double t) const {
  std::vector<std::vector<double>> out(2, std::vector<double>(classes_.size(), 0.0));
  for (std::size_t k = 0; k < classes_.size(); ++k) {
    const auto& c = classes_[k];
    const double w = c.estimator.weight;
    if (w <= 0.0) continue;
    double left;
    if (t < c.min) {
      left = 0.0;
    } else if (t >= c.max) {
      left = w;
    } else {
      left = std::clamp(c.estimator.weightAtOrBelow(t), 0.0, w);
    }
    out[0][k] = left;
    out[1][k] = w - left;
  }
  return out;
}

std::optional<SplitSuggestion> GaussianObserver::bestSplit(std::uint32_t attribute,
                                                           SplitCriterion criterion,
                                                           std::span<const double> preSplit) const {
  std::optional<SplitSuggestion> best;
  for (double t : candidateThresholds()) {
    auto dists = binarySplit(t);
    for (auto& d : dists) d.resize(preSplit.size(), 0.0);
    const double merit = splitMerit(criterion, preSplit, dists);
    if (!best || merit > best->merit) {
      best = SplitSuggestion{SplitTest{attribute, true, t, 2}, merit, std::move(dists)};
    }
  }
  return best;
}

}  // namespace streamforge::vht
