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
#include <string>
#include <vector>

#include "streamforge/instance/schema.hpp"

namespace streamforge {

/// Cumulative prequential counters.
struct MetricWindow {
  std::uint64_t instancesSeen = 0;
  double weightSeen = 0.0;
  double correct = 0.0;
  /// Classification: weighted confusion marginals for kappa.
  std::vector<double> truthMass;
  std::vector<double> predictedMass;
  /// Regression: normalised error sums.
  double absError = 0.0;
  double squaredError = 0.0;

  void addClassification(std::size_t truth, std::size_t predicted, double weight);
  /// Clamps `prediction` to `range` and normalises the error by its span.
  void addRegression(double truth, double prediction, double weight, const NumericRange& range);
};

struct MetricValues {
  double first = 0.0;   // accuracy or MAE
  double second = 0.0;  // kappa or RMSE
};

/// Accuracy and kappa for classification schemas, normalised MAE and RMSE
/// for regression. Throws Error when no instance was seen.
MetricValues computeMetrics(const MetricWindow& window, const InstanceSchema& schema);

double meanAbsoluteError(const std::vector<double>& errors, double range);
double rootMeanSquaredError(const std::vector<double>& errors, double range);

struct ReportRow {
  std::uint64_t instances = 0;
  double first = 0.0;
  double second = 0.0;
  double throughput = 0.0;
  double seconds = 0.0;
};

/// `instances,accuracy,kappa,...` or `instances,mae,rmse,...`.
std::string csvHeader(bool classification);
/// Timing columns are left empty when `timing` is false.
std::string csvRow(const ReportRow& row, bool timing);

}  // namespace streamforge
