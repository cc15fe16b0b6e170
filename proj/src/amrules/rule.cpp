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

#include "streamforge/amrules/rule.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "streamforge/common/error.hpp"
#include "streamforge/vht/criterion.hpp"

namespace streamforge::amrules {

namespace {

constexpr double kErrorFade = 0.99;

std::string formatValue(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

bool Feature::matches(const Instance& instance) const {
  const double v = instance.value(attribute);
  if (isMissing(v)) return false;
  switch (op) {
    case FeatureOp::Less:
      return v < value;
    case FeatureOp::GreaterEqual:
      return v >= value;
    case FeatureOp::Equal:
      return v == value;
  }
  return false;
}

std::string Feature::toString() const {
  const char* sym = op == FeatureOp::Less ? "<" : op == FeatureOp::GreaterEqual ? ">=" : "=";
  return "a" + std::to_string(attribute) + sym + formatValue(value);
}

bool covers(const std::vector<Feature>& body, const Instance& instance) {
  for (const auto& f : body) {
    if (!f.matches(instance)) return false;
  }
  return true;
}

std::string bodyString(const std::vector<Feature>& body) {
  std::string out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (i) out += " & ";
    out += body[i].toString();
  }
  return out.empty() ? "true" : out;
}

void TargetStats::add(double y, double weight) {
  count += weight;
  sum += weight * y;
  sumSquares += weight * y * y;
}

double TargetStats::variance() const {
  if (!(count > 0.0)) return 0.0;
  const double m = sum / count;
  return std::max(0.0, sumSquares / count - m * m);
}

double TargetStats::sd() const { return std::sqrt(variance()); }

TargetStats& TargetStats::operator+=(const TargetStats& o) {
  count += o.count;
  sum += o.sum;
  sumSquares += o.sumSquares;
  return *this;
}

TargetStats operator-(TargetStats a, const TargetStats& b) {
  a.count -= b.count;
  a.sum -= b.sum;
  a.sumSquares -= b.sumSquares;
  return a;
}

std::optional<double> sdr(const TargetStats& parent, const TargetStats& left, const TargetStats& right) {
  if (!(parent.count > 0.0) || !(left.count > 0.0) || !(right.count > 0.0)) return std::nullopt;
  return parent.sd() - left.count / parent.count * left.sd() - right.count / parent.count * right.sd();
}

void NumericTargetObserver::observe(double x, double y, double weight) {
  if (isMissing(x) || !(weight > 0.0)) return;
  if (total_.count > 0.0) {
    min_ = std::min(min_, x);
    max_ = std::max(max_, x);
  } else {
    min_ = max_ = x;
  }
  total_.add(y, weight);
  if (edges_.empty()) {
    raw_.push_back({x, y, weight});
    if (raw_.size() >= warmup_) buildGrid();
    return;
  }
  const auto idx = static_cast<std::size_t>(std::upper_bound(edges_.begin(), edges_.end(), x) - edges_.begin());
  bins_[idx].add(y, weight);
}

void NumericTargetObserver::buildGrid() {
  const double lo = min_, hi = max_;
  edges_.resize(kBins + 1);
  for (std::size_t k = 0; k <= kBins; ++k) {
    edges_[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(kBins);
  }
  edges_[kBins] = hi;
  bins_.assign(kBins + 2, TargetStats{});
  for (const auto& r : raw_) {
    const auto idx =
        static_cast<std::size_t>(std::upper_bound(edges_.begin(), edges_.end(), r.x) - edges_.begin());
    bins_[idx].add(r.y, r.w);
  }
  raw_.clear();
  raw_.shrink_to_fit();
}

std::vector<SplitCandidate> NumericTargetObserver::candidates() const {
  std::vector<SplitCandidate> out;
  if (!(total_.count > 0.0) || !(max_ > min_)) return out;
  const double step = (max_ - min_) / static_cast<double>(kCandidates + 1);
  if (edges_.empty()) {
    for (std::size_t i = 0; i < kCandidates; ++i) {
      SplitCandidate c;
      c.threshold = min_ + step * static_cast<double>(i + 1);
      for (const auto& r : raw_) (r.x < c.threshold ? c.left : c.right).add(r.y, r.w);
      out.push_back(c);
    }
    return out;
  }
  const double lo = edges_.front(), hi = edges_.back();
  std::vector<std::size_t> ks;
  for (std::size_t i = 0; i < kCandidates; ++i) {
    const double t = min_ + step * static_cast<double>(i + 1);
    std::size_t k = 0;
    if (hi > lo) {
      const double pos = std::round((t - lo) / (hi - lo) * static_cast<double>(kBins));
      k = static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(kBins)));
    }
    if (std::find(ks.begin(), ks.end(), k) == ks.end()) ks.push_back(k);
  }
  for (std::size_t k : ks) {
    SplitCandidate c;
    c.threshold = edges_[k];
    // x < edges_[k] exactly when its bin index is at most k.
    for (std::size_t b = 0; b < bins_.size(); ++b) (b <= k ? c.left : c.right) += bins_[b];
    out.push_back(c);
  }
  return out;
}

void NominalTargetObserver::observe(double x, double y, double weight) {
  if (isMissing(x) || x < 0.0 || x >= static_cast<double>(perValue_.size()) || !(weight > 0.0)) return;
  perValue_[static_cast<std::size_t>(x)].add(y, weight);
  total_.add(y, weight);
}

std::vector<SplitCandidate> NominalTargetObserver::candidates() const {
  std::vector<SplitCandidate> out;
  for (std::size_t v = 0; v < perValue_.size(); ++v) {
    if (!(perValue_[v].count > 0.0)) continue;
    SplitCandidate c;
    c.threshold = static_cast<double>(v);
    c.left = perValue_[v];
    for (std::size_t u = 0; u < perValue_.size(); ++u) {
      if (u != v) c.right += perValue_[u];
    }
    out.push_back(c);
  }
  return out;
}

bool PageHinkley::update(double error) {
  ++n_;
  mean_ += (error - mean_) / static_cast<double>(n_);
  m_ += error - mean_ - config_.delta;
  min_ = std::min(min_, m_);
  return m_ - min_ > config_.lambda;
}

AnomalyDetector::AnomalyDetector(std::shared_ptr<const InstanceSchema> schema) : schema_(std::move(schema)) {
  numeric_.resize(schema_->attributeCount());
  nominal_.resize(schema_->attributeCount());
  for (std::size_t a = 0; a < schema_->attributeCount(); ++a) {
    if (schema_->attribute(a).isCategorical()) nominal_[a].assign(schema_->attribute(a).valueCount(), 0.0);
  }
}

void AnomalyDetector::observe(const Instance& instance, double weight) {
  if (!(weight > 0.0)) return;
  observations_ += weight;
  for (std::size_t a = 0; a < numeric_.size(); ++a) {
    const double v = instance.value(a);
    if (isMissing(v)) continue;
    if (!nominal_[a].empty()) {
      if (v >= 0.0 && v < static_cast<double>(nominal_[a].size())) nominal_[a][static_cast<std::size_t>(v)] += weight;
      continue;
    }
    Numeric& n = numeric_[a];
    const double total = n.w + weight;
    const double d = v - n.mean;
    n.mean += d * weight / total;
    n.m2 += weight * d * (v - n.mean);
    n.w = total;
  }
}

double AnomalyDetector::score(const Instance& instance) const {
  if (!(observations_ > 0.0)) return 1.0;
  double logSum = 0.0;
  std::size_t used = 0;
  for (std::size_t a = 0; a < numeric_.size(); ++a) {
    const double v = instance.value(a);
    if (isMissing(v)) continue;
    double p;
    if (!nominal_[a].empty()) {
      double total = 0.0;
      for (double c : nominal_[a]) total += c;
      if (!(total > 0.0)) continue;
      p = v >= 0.0 && v < static_cast<double>(nominal_[a].size()) ? nominal_[a][static_cast<std::size_t>(v)] / total
                                                                     : 0.0;
    } else {
      const Numeric& n = numeric_[a];
      if (!(n.w > 0.0)) continue;
      const double var = n.w > 1.0 ? n.m2 / (n.w - 1.0) : 0.0;
      const double sd = std::sqrt(std::max(0.0, var));
      if (sd > 0.0) {
        const double k = std::abs(v - n.mean) / sd;
        p = 1.0 / (1.0 + k * k);
      } else {
        p = v == n.mean ? 1.0 : 0.0;
      }
    }
    logSum += std::log(std::max(p, 1e-300));
    ++used;
  }
  return used ? std::exp(logSum / static_cast<double>(used)) : 1.0;
}

bool AnomalyDetector::isAnomaly(const Instance& instance, double cutoff, double minObservations) const {
  return observations_ >= minObservations && score(instance) < cutoff;
}

double Head::Norm::sd() const { return w > 1.0 ? std::sqrt(std::max(0.0, m2 / (w - 1.0))) : 0.0; }

void Head::Norm::add(double v, double weight) {
  const double total = w + weight;
  const double d = v - mean;
  mean += d * weight / total;
  m2 += weight * d * (v - mean);
  w = total;
}

Head::Head(std::vector<bool> numeric, double learningRate)
    : numeric_(std::move(numeric)),
      learningRate_(learningRate),
      norms_(numeric_.size()),
      weights_(numeric_.size(), 0.0) {}

double Head::standardise(std::size_t a, double v) const {
  if (!numeric_[a] || isMissing(v)) return 0.0;
  const double sd = norms_[a].sd();
  return sd > 0.0 ? (v - norms_[a].mean) / sd : 0.0;
}

double Head::linearPrediction(const Instance& instance) const {
  if (!(targetNorm_.w > 0.0)) return 0.0;
  double yn = bias_;
  for (std::size_t a = 0; a < weights_.size(); ++a) {
    if (numeric_[a]) yn += weights_[a] * standardise(a, instance.value(a));
  }
  const double sd = targetNorm_.sd();
  return sd > 0.0 ? targetNorm_.mean + yn * sd : targetNorm_.mean;
}

double Head::predict(const Instance& instance) const {
  return usesLinear() ? linearPrediction(instance) : meanPrediction();
}

void Head::learn(const Instance& instance, double y, double weight) {
  if (!(weight > 0.0)) return;
  meanError_ = kErrorFade * meanError_ + std::abs(y - meanPrediction());
  linearError_ = kErrorFade * linearError_ + std::abs(y - linearPrediction(instance));
  target_.add(y, weight);
  targetNorm_.add(y, weight);
  for (std::size_t a = 0; a < norms_.size(); ++a) {
    const double v = instance.value(a);
    if (numeric_[a] && !isMissing(v)) norms_[a].add(v, weight);
  }
  const double sd = targetNorm_.sd();
  const double target = sd > 0.0 ? (y - targetNorm_.mean) / sd : 0.0;
  double yn = bias_;
  std::vector<double> z(weights_.size(), 0.0);
  for (std::size_t a = 0; a < weights_.size(); ++a) {
    z[a] = standardise(a, instance.value(a));
    yn += weights_[a] * z[a];
  }
  const double step = learningRate_ * weight * (target - yn);
  for (std::size_t a = 0; a < weights_.size(); ++a) weights_[a] += step * z[a];
  bias_ += step;
}

void AmrConfig::validate() const {
  if (!(expansionPeriod >= 1.0)) throw ConfigError("expansion period must be at least 1");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must be in (0,1)");
  if (!(tieThreshold > 0.0)) throw ConfigError("tie threshold must be positive");
  if (!(pageHinkley.delta > 0.0) || !(pageHinkley.lambda > 0.0)) {
    throw ConfigError("Page-Hinkley parameters must be positive");
  }
  if (!(anomalyCutoff > 0.0 && anomalyCutoff < 1.0)) throw ConfigError("anomaly cutoff must be in (0,1)");
  if (!(anomalyMinInstances >= 0.0)) throw ConfigError("anomaly warm-up must be non-negative");
  if (!(learningRate > 0.0)) throw ConfigError("learning rate must be positive");
  if (learners < 1) throw ConfigError("learner parallelism must be at least 1");
  if (aggregators < 1) throw ConfigError("aggregator count must be at least 1");
  if (headRefresh < 1) throw ConfigError("head refresh period must be at least 1");
}

bool shouldExpand(double best, double second, double epsilon, double tieThreshold) {
  if (!(best > 0.0)) return false;
  return second / best + epsilon < 1.0 || epsilon < tieThreshold;
}

Rule::Rule(std::uint64_t id, std::shared_ptr<const InstanceSchema> schema, const AmrConfig& config)
    : id_(id),
      schema_(std::move(schema)),
      config_(config),
      range_(schema_->targetRange().span()),
      drift_(config.pageHinkley),
      anomaly_(schema_) {
  if (schema_->isClassification()) throw ConfigError("rules need a numeric target");
  std::vector<bool> numeric;
  for (const auto& a : schema_->attributes()) numeric.push_back(a.isNumeric());
  head_ = Head(std::move(numeric), config_.learningRate);
  resetStatistics();
}

void Rule::resetStatistics() {
  stats_ = TargetStats{};
  numeric_.clear();
  nominal_.clear();
  const auto warmup = static_cast<std::size_t>(std::max(1.0, config_.expansionPeriod));
  for (std::size_t a = 0; a < schema_->attributeCount(); ++a) {
    const auto& spec = schema_->attribute(a);
    if (spec.isNumeric()) {
      numeric_.emplace_back(static_cast<std::uint32_t>(a), NumericTargetObserver(warmup));
    } else {
      nominal_.emplace_back(static_cast<std::uint32_t>(a), NominalTargetObserver(spec.valueCount()));
    }
  }
}

bool Rule::isAnomaly(const Instance& instance) const {
  return anomaly_.isAnomaly(instance, config_.anomalyCutoff, config_.anomalyMinInstances);
}

RuleUpdate Rule::learn(const Instance& instance) {
  RuleUpdate u;
  if (!instance.hasLabel()) return u;
  const double y = *instance.label();
  const double w = instance.weight();
  if (!(w > 0.0)) return u;
  const bool alarm = drift_.update(std::abs(y - head_.predict(instance)) / range_);
  head_.learn(instance, y, w);
  anomaly_.observe(instance, w);
  stats_.add(y, w);
  for (auto& [a, o] : numeric_) o.observe(instance.value(a), y, w);
  for (auto& [a, o] : nominal_) o.observe(instance.value(a), y, w);
  ++updates_;
  sinceAttempt_ += w;
  if (alarm) {
    u.evict = true;
    return u;
  }
  if (sinceAttempt_ < config_.expansionPeriod) return u;
  sinceAttempt_ = 0.0;
  auto attempt = evaluateExpansion();
  if (attempt.feature) {
    body_.push_back(*attempt.feature);
    resetStatistics();
    u.expansion = attempt.feature;
  }
  return u;
}

ExpansionAttempt Rule::evaluateExpansion() const {
  struct Best {
    double merit;
    std::uint32_t attribute;
    Feature feature;
  };
  std::vector<Best> perAttribute;
  auto consider = [&](std::uint32_t a, const std::vector<SplitCandidate>& cands, bool numeric) {
    std::optional<Best> best;
    for (const auto& c : cands) {
      TargetStats parent = c.left;
      parent += c.right;
      auto m = sdr(parent, c.left, c.right);
      if (!m || (best && !(*m > best->merit))) continue;
      Feature f{a, FeatureOp::Equal, c.threshold};
      if (numeric) f.op = c.left.sd() <= c.right.sd() ? FeatureOp::Less : FeatureOp::GreaterEqual;
      best = Best{*m, a, f};
    }
    if (best) perAttribute.push_back(*best);
  };
  for (const auto& [a, o] : numeric_) consider(a, o.candidates(), true);
  for (const auto& [a, o] : nominal_) consider(a, o.candidates(), false);
  std::sort(perAttribute.begin(), perAttribute.end(), [](const Best& x, const Best& y) {
    if (x.merit != y.merit) return x.merit > y.merit;
    return x.attribute < y.attribute;
  });
  ExpansionAttempt out;
  out.epsilon = vht::hoeffdingBound(1.0, config_.delta, std::max(stats_.count, 1.0));
  if (perAttribute.empty()) return out;
  out.best = perAttribute[0].merit;
  out.second = perAttribute.size() > 1 ? std::max(0.0, perAttribute[1].merit) : 0.0;
  if (shouldExpand(out.best, out.second, out.epsilon, config_.tieThreshold)) out.feature = perAttribute[0].feature;
  return out;
}

bool Rule::candidatesConsistent() const {
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); };
  auto check = [&](const TargetStats& total, const std::vector<SplitCandidate>& cands) {
    for (const auto& c : cands) {
      if (!close(c.left.count + c.right.count, total.count) || !close(c.left.sum + c.right.sum, total.sum) ||
          !close(c.left.sumSquares + c.right.sumSquares, total.sumSquares)) {
        return false;
      }
    }
    return true;
  };
  for (const auto& [a, o] : numeric_) {
    if (!check(o.total(), o.candidates())) return false;
  }
  for (const auto& [a, o] : nominal_) {
    if (!check(o.total(), o.candidates())) return false;
  }
  return true;
}

}  // namespace streamforge::amrules
