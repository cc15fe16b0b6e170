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

#include <memory>
#include <optional>

#include "streamforge/amrules/processors.hpp"
#include "streamforge/eval/learner.hpp"

namespace streamforge::amrules {

/// Sequential AMRules in one processor.
class AmrulesLocalLearner final : public Learner {
 public:
  explicit AmrulesLocalLearner(AmrConfig config);
  std::string name() const override { return "AMRulesLocal"; }
  void checkSchema(const InstanceSchema& schema) const override;
  std::vector<StreamHandle> build(TopologyBuilder& builder, std::shared_ptr<const InstanceSchema> schema,
                                  StreamHandle input) override;
  ProcessorHandle model() const { return model_.value(); }

 private:
  AmrConfig config_;
  std::optional<ProcessorHandle> model_;
};

/// One model aggregator owning the default rule plus `config.learners` rule
/// learners.
class VamrLearner final : public Learner {
 public:
  explicit VamrLearner(AmrConfig config);
  std::string name() const override { return "VAMR"; }
  void checkSchema(const InstanceSchema& schema) const override;
  std::vector<StreamHandle> build(TopologyBuilder& builder, std::shared_ptr<const InstanceSchema> schema,
                                  StreamHandle input) override;
  ProcessorHandle aggregator() const { return aggregator_.value(); }
  ProcessorHandle learners() const { return learners_.value(); }

 private:
  AmrConfig config_;
  std::optional<ProcessorHandle> aggregator_;
  std::optional<ProcessorHandle> learners_;
};

/// `config.aggregators` model aggregators, `config.learners` rule learners
/// and a single default-rule learner.
class HamrLearner final : public Learner {
 public:
  explicit HamrLearner(AmrConfig config);
  std::string name() const override { return "HAMR"; }
  void checkSchema(const InstanceSchema& schema) const override;
  std::vector<StreamHandle> build(TopologyBuilder& builder, std::shared_ptr<const InstanceSchema> schema,
                                  StreamHandle input) override;
  ProcessorHandle aggregators() const { return aggregators_.value(); }
  ProcessorHandle learners() const { return learners_.value(); }
  ProcessorHandle defaultLearner() const { return default_.value(); }

 private:
  AmrConfig config_;
  std::optional<ProcessorHandle> aggregators_;
  std::optional<ProcessorHandle> learners_;
  std::optional<ProcessorHandle> default_;
};

}  // namespace streamforge::amrules
