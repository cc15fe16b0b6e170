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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "streamforge/instance/instance.hpp"
#include "streamforge/vht/criterion.hpp"

namespace streamforge::vht {

/// Routing test of an internal node. Numeric tests are binary (value <=
/// threshold goes to branch 0); nominal tests have one branch per value.
struct SplitTest {
  std::uint32_t attribute = 0;
  bool numeric = true;
  double threshold = 0.0;
  std::size_t branches = 2;

  /// Branch for `instance`, or nullopt when the value is missing or outside
  /// the nominal domain.
  std::optional<std::size_t> branch(const Instance& instance) const;
  bool operator==(const SplitTest&) const = default;
};

struct SplitSuggestion {
  SplitTest test;
  double merit = 0.0;
  /// Class distribution of each branch as estimated by the observer.
  std::vector<std::vector<double>> branchDistributions;
};

/// Per-(leaf, attribute) sufficient statistics.
class AttributeObserver {
 public:
  virtual ~AttributeObserver() = default;
  /// Missing values are ignored.
  virtual void observe(double value, std::size_t classIndex, double weight) = 0;
  /// Observed mass per class.
  virtual std::vector<double> classMass(std::size_t classCount) const = 0;
  virtual double totalMass() const = 0;
  /// Best split on this attribute; nullopt when no valid split exists.
  virtual std::optional<SplitSuggestion> bestSplit(std::uint32_t attribute, SplitCriterion criterion,
                                                   std::span<const double> preSplit) const = 0;
  virtual std::unique_ptr<AttributeObserver> clone() const = 0;
};

/// n_ijk counters: weight per (value j, class k).
class NominalObserver final : public AttributeObserver {
 public:
  explicit NominalObserver(std::size_t valueCount);
  void observe(double value, std::size_t classIndex, double weight) override;
  std::vector<double> classMass(std::size_t classCount) const override;
  double totalMass() const override { return total_; }
  std::optional<SplitSuggestion> bestSplit(std::uint32_t attribute, SplitCriterion criterion,
                                           std::span<const double> preSplit) const override;
  std::unique_ptr<AttributeObserver> clone() const override {
    return std::make_unique<NominalObserver>(*this);
  }
  double count(std::size_t value, std::size_t classIndex) const;

 private:
  std::size_t valueCount_;
  std::vector<std::vector<double>> counts_;  // [value][class]
  double total_ = 0.0;
};

/// Weighted running mean and variance.
struct GaussianEstimator {
  double weight = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double value, double w);
  double variance() const { return weight > 1.0 ? m2 / (weight - 1.0) : 0.0; }
  double stddev() const;
  /// Estimated weight at or below `value`.
  double weightAtOrBelow(double value) const;
};

/// Per-class Gaussian summaries plus observed per-class range. Candidate
/// thresholds are min + (max - min)(i + 1)/11 for i in 0..9.
class GaussianObserver final : public AttributeObserver {
 public:
  static constexpr std::size_t kCandidates = 10;

  void observe(double value, std::size_t classIndex, double weight) override;
  std::vector<double> classMass(std::size_t classCount) const override;
  double totalMass() const override { return total_; }
  std::optional<SplitSuggestion> bestSplit(std::uint32_t attribute, SplitCriterion criterion,
                                           std::span<const double> preSplit) const override;
  std::unique_ptr<AttributeObserver> clone() const override {
    return std::make_unique<GaussianObserver>(*this);
  }

  std::vector<double> candidateThresholds() const;
  /// [left, right] class distributions for threshold `t`.
  std::vector<std::vector<double>> binarySplit(double t) const;

 private:
  struct PerClass {
    GaussianEstimator estimator;
    double min = 0.0;
    double max = 0.0;
  };
  std::vector<PerClass> classes_;
  double total_ = 0.0;
};

}  // namespace streamforge::vht
