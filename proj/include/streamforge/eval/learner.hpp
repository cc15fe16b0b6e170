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

#include "streamforge/instance/instance.hpp"
#include "streamforge/instance/schema.hpp"
#include "streamforge/topology/topology.hpp"

namespace streamforge {

/// Source -> learner message. `testing` asks for a prediction, `training`
/// for a model update; prequential evaluation sets both.
struct InstanceEvent {
  std::shared_ptr<const Instance> instance;
  std::uint64_t index = 0;
  bool testing = true;
  bool training = true;
};

/// Learner -> evaluator message. For classification `prediction` is a class
/// index; `truth` is NaN for unlabelled instances.
struct PredictionEvent {
  std::uint64_t index = 0;
  double truth = 0.0;
  double prediction = 0.0;
  double weight = 1.0;
};

/// A learning algorithm expressed as a sub-topology.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual std::string name() const = 0;
  /// Throws ConfigError when the learner cannot handle `schema`.
  virtual void checkSchema(const InstanceSchema& schema) const = 0;
  /// Adds processors that consume instance events from `input` and returns
  /// the streams carrying PredictionEvents.
  virtual std::vector<StreamHandle> build(TopologyBuilder& builder,
                                          std::shared_ptr<const InstanceSchema> schema,
                                          StreamHandle input) = 0;
};

}  // namespace streamforge
