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
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "streamforge/instance/instance.hpp"
#include "streamforge/instance/schema.hpp"

namespace streamforge::amrules {

enum class FeatureOp { Less, GreaterEqual, Equal };

/// Condition on one attribute. A missing value satisfies no feature.
struct Feature {
  std::uint32_t attribute = 0;
  FeatureOp op = FeatureOp::Less;
  double value = 0.0;

  bool matches(const Instance& instance) const;
  std::string toString() const;
  bool operator==(const Feature&) const = default;
};

/// Conjunction of the features; an empty body covers everything.
bool covers(const std::vector<Feature>& body, const Instance& instance);

std::string bodyString(const std::vector<Feature>& body);

/// Weighted count, sum and sum of squares of a target.
struct TargetStats {
  double count = 0.0;
  double sum = 0.0;
  double sumSquares = 0.0;

  void add(double y, double weight = 1.0);
  double mean() const { return count > 0.0 ? sum / count : 0.0; }
  /// Population variance, clamped at 0.
  double variance() const;
  double sd() const;

  TargetStats& operator+=(const TargetStats& o);
  friend TargetStats operator-(TargetStats a, const TargetStats& b);
  bool operator==(const TargetStats&) const = default;
};

/// sd(parent) - sum_i |S_i|/|S| sd(S_i); nullopt when a side is empty.
std::optional<double> sdr(const TargetStats& parent, const TargetStats& left, const TargetStats& right);

/// A binary candidate maintained by an attribute observer; `left` holds the
/// instances satisfying the `<` (numeric) or `=` (nominal) side.
struct SplitCandidate {
  double threshold = 0.0;
  TargetStats left;
  TargetStats right;
};

/// Target statistics of a numeric attribute. Raw values are kept until
/// `warmup` observations, after which they are folded into a fixed grid of
/// kBins bins over the warm-up range plus underflow and overflow bins.
/// Candidates sit on bin edges, so their two sides partition the
/// observations.
class NumericTargetObserver {
 public:
  static constexpr std::size_t kBins = 110;
  static constexpr std::size_t kCandidates = 10;

  explicit NumericTargetObserver(std::size_t warmup) : warmup_(warmup) {}

  void observe(double x, double y, double weight);
  /// Up to kCandidates thresholds near min + (max - min)(i + 1)/11.
  std::vector<SplitCandidate> candidates() const;
  const TargetStats& total() const noexcept { return total_; }

 private:
  struct Raw {
    double x, y, w;
  };
  void buildGrid();

  std::size_t warmup_;
  std::vector<Raw> raw_;
  std::vector<double> edges_;       // kBins + 1 edges once the grid exists
  std::vector<TargetStats> bins_;   // underflow, kBins interior, overflow
  double min_ = 0.0;
  double max_ = 0.0;
  TargetStats total_;
};

/// Target statistics per value of a categorical attribute. Candidate v
/// separates `= v` from the rest.
class NominalTargetObserver {
 public:
  explicit NominalTargetObserver(std::size_t values) : perValue_(values) {}
  void observe(double x, double y, double weight);
  std::vector<SplitCandidate> candidates() const;
  const TargetStats& total() const noexcept { return total_; }

 private:
  std::vector<TargetStats> perValue_;
  TargetStats total_;
};

struct PageHinkleyConfig {
  /// Drift tolerance in normalised error units.
  double delta = 0.005;
  /// Alarm threshold in normalised error units.
  double lambda = 50.0;
};

/// One-sided Page-Hinkley test on an error stream. Invariant: cumulative()
/// >= minimum().
class PageHinkley {
 public:
  explicit PageHinkley(PageHinkleyConfig config = {}) : config_(config) {}
  /// Adds one error; true when m_t - M_t exceeds lambda.
  bool update(double error);
  double cumulative() const noexcept { return m_; }
  double minimum() const noexcept { return min_; }
  double mean() const noexcept { return mean_; }
  std::uint64_t count() const noexcept { return n_; }

 private:
  PageHinkleyConfig config_;
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m_ = 0.0;
  double min_ = 0.0;
};

/// Per-attribute summaries of the instances a rule has learned from.
/// Numeric attributes score 1/(1 + k^2) (Cantelli) at k standard deviations
/// from the mean, categorical ones the observed value frequency. An
/// instance is anomalous when the geometric mean of the scores is below the
/// cutoff.
class AnomalyDetector {
 public:
  explicit AnomalyDetector(std::shared_ptr<const InstanceSchema> schema);
  void observe(const Instance& instance, double weight);
  /// Geometric mean of per-attribute scores; 1 before any observation.
  double score(const Instance& instance) const;
  bool isAnomaly(const Instance& instance, double cutoff, double minObservations) const;
  double observations() const noexcept { return observations_; }

 private:
  struct Numeric {
    double w = 0.0, mean = 0.0, m2 = 0.0;
  };
  std::shared_ptr<const InstanceSchema> schema_;
  std::vector<Numeric> numeric_;
  std::vector<std::vector<double>> nominal_;
  double observations_ = 0.0;
};

/// Rule head: the target mean and a least-mean-squares linear model on
/// standardised numeric attributes. Predicts with whichever has the lower
/// faded absolute error.
class Head {
 public:
  Head() = default;
  /// `numeric[a]` selects the attributes used by the linear model.
  Head(std::vector<bool> numeric, double learningRate);

  double predict(const Instance& instance) const;
  double meanPrediction() const { return target_.mean(); }
  double linearPrediction(const Instance& instance) const;
  void learn(const Instance& instance, double y, double weight);
  bool usesLinear() const { return linearError_ < meanError_; }
  const TargetStats& targets() const noexcept { return target_; }
  bool operator==(const Head&) const = default;

 private:
  struct Norm {
    double w = 0.0, mean = 0.0, m2 = 0.0;
    double sd() const;
    void add(double v, double weight);
    bool operator==(const Norm&) const = default;
  };
  double standardise(std::size_t a, double v) const;

  std::vector<bool> numeric_;
  double learningRate_ = 0.01;
  TargetStats target_;
  Norm targetNorm_;
  std::vector<Norm> norms_;
  std::vector<double> weights_;
  double bias_ = 0.0;
  double meanError_ = 0.0;
  double linearError_ = 0.0;
};

struct AmrConfig {
  /// Updates between expansion attempts (N_m).
  double expansionPeriod = 200;
  double delta = 1e-7;
  double tieThreshold = 0.05;
  PageHinkleyConfig pageHinkley;
  double anomalyCutoff = 0.1;
  double anomalyMinInstances = 30;
  double learningRate = 0.01;
  bool ordered = false;
  /// Rule learners (p) for VAMR and HAMR.
  std::size_t learners = 1;
  /// Model aggregators (r) for HAMR.
  std::size_t aggregators = 1;
  /// A learner refreshes the aggregator's copy of a head every this many
  /// updates of the rule.
  std::uint64_t headRefresh = 1000;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

/// Result of one rule update.
struct RuleUpdate {
  bool evict = false;
  std::optional<Feature> expansion;
};

/// Outcome of an expansion attempt, kept for inspection.
struct ExpansionAttempt {
  std::optional<Feature> feature;
  double best = 0.0;
  double second = 0.0;
  double epsilon = 0.0;
};

/// Evaluates the expansion condition on per-attribute best SDR values:
/// expand when best > 0 and (second/best + epsilon < 1 or epsilon < tau).
bool shouldExpand(double best, double second, double epsilon, double tieThreshold);

class Rule {
 public:
  static constexpr std::uint64_t kDefaultId = std::numeric_limits<std::uint64_t>::max();

  Rule(std::uint64_t id, std::shared_ptr<const InstanceSchema> schema, const AmrConfig& config);

  std::uint64_t id() const noexcept { return id_; }
  void setId(std::uint64_t id) noexcept { id_ = id; }
  const std::vector<Feature>& body() const noexcept { return body_; }
  void setBody(std::vector<Feature> body) { body_ = std::move(body); }
  const Head& head() const noexcept { return head_; }
  void setHead(Head head) { head_ = std::move(head); }

  bool covers(const Instance& instance) const { return amrules::covers(body_, instance); }
  bool isAnomaly(const Instance& instance) const;
  double predict(const Instance& instance) const { return head_.predict(instance); }

  /// Learns from a covered, labelled instance: drift test on the normalised
  /// error, head, anomaly and split statistics, then an expansion attempt
  /// every expansionPeriod updates. No expansion is tried after an alarm.
  RuleUpdate learn(const Instance& instance);

  /// Best feature if the expansion condition holds; does not modify the rule.
  ExpansionAttempt evaluateExpansion() const;

  const TargetStats& stats() const noexcept { return stats_; }
  const PageHinkley& drift() const noexcept { return drift_; }
  std::uint64_t updates() const noexcept { return updates_; }
  std::size_t observerCount() const noexcept { return numeric_.size() + nominal_.size(); }
  /// Every maintained candidate satisfies left + right == observer total.
  bool candidatesConsistent() const;

 private:
  void resetStatistics();

  std::uint64_t id_;
  std::shared_ptr<const InstanceSchema> schema_;
  AmrConfig config_;
  double range_;
  std::vector<Feature> body_;
  Head head_;
  TargetStats stats_;
  std::vector<std::pair<std::uint32_t, NumericTargetObserver>> numeric_;
  std::vector<std::pair<std::uint32_t, NominalTargetObserver>> nominal_;
  PageHinkley drift_;
  AnomalyDetector anomaly_;
  std::uint64_t updates_ = 0;
  double sinceAttempt_ = 0.0;
};

}  // namespace streamforge::amrules
