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

#include "streamforge/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "streamforge/common/error.hpp"

namespace streamforge {

void MetricWindow::addClassification(std::size_t truth, std::size_t predicted, double weight) {
  const std::size_t need = std::max(truth, predicted) + 1;
  if (truthMass.size() < need) truthMass.resize(need, 0.0);
  if (predictedMass.size() < need) predictedMass.resize(need, 0.0);
  ++instancesSeen;
  weightSeen += weight;
  if (truth == predicted) correct += weight;
  truthMass[truth] += weight;
  predictedMass[predicted] += weight;
}

void MetricWindow::addRegression(double truth, double prediction, double weight, const NumericRange& range) {
  const double p = std::clamp(prediction, range.min, range.max);
  const double e = std::abs(truth - p) / range.span();
  ++instancesSeen;
  weightSeen += weight;
  absError += weight * e;
  squaredError += weight * e * e;
}

MetricValues computeMetrics(const MetricWindow& window, const InstanceSchema& schema) {
  if (window.instancesSeen == 0 || !(window.weightSeen > 0.0)) {
    throw Error("metrics need at least one weighted instance");
  }
  MetricValues v;
  if (schema.isClassification()) {
    const double n = window.weightSeen;
    v.first = window.correct / n;
    double chance = 0.0;
    for (std::size_t k = 0; k < window.truthMass.size() && k < window.predictedMass.size(); ++k) {
      chance += (window.truthMass[k] / n) * (window.predictedMass[k] / n);
    }
    v.second = chance < 1.0 ? (v.first - chance) / (1.0 - chance) : 0.0;
  } else {
    v.first = window.absError / window.weightSeen;
    v.second = std::sqrt(window.squaredError / window.weightSeen);
  }
  return v;
}

double meanAbsoluteError(const std::vector<double>& errors, double range) {
  if (errors.empty()) throw Error("metrics need at least one error");
  double s = 0.0;
  for (double e : errors) s += std::abs(e);
  return s / static_cast<double>(errors.size()) / range;
}

double rootMeanSquaredError(const std::vector<double>& errors, double range) {
  if (errors.empty()) throw Error("metrics need at least one error");
  double s = 0.0;
  for (double e : errors) s += e * e;
  return std::sqrt(s / static_cast<double>(errors.size())) / range;
}

std::string csvHeader(bool classification) {
  return classification ? "instances,accuracy,kappa,throughput,seconds" : "instances,mae,rmse,throughput,seconds";
}

std::string csvRow(const ReportRow& row, bool timing) {
  char buf[256];
  if (timing) {
    std::snprintf(buf, sizeof buf, "%llu,%.6f,%.6f,%.1f,%.3f", static_cast<unsigned long long>(row.instances),
                  row.first, row.second, row.throughput, row.seconds);
  } else {
    std::snprintf(buf, sizeof buf, "%llu,%.6f,%.6f,,", static_cast<unsigned long long>(row.instances), row.first,
                  row.second);
  }
  return buf;
}

}  // namespace streamforge
