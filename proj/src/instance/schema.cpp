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

#include "streamforge/instance/schema.hpp"

#include <algorithm>
#include <unordered_set>

#include "streamforge/common/error.hpp"
#include "streamforge/instance/instance.hpp"

namespace streamforge {

AttributeSpec AttributeSpec::numeric(std::string name) {
  return AttributeSpec(std::move(name), {});
}

AttributeSpec AttributeSpec::categorical(std::string name,
                                         std::vector<std::string> values) {
  if (values.empty()) {
    throw ConfigError("categorical attribute '" + name + "' has no values");
  }
  std::unordered_set<std::string> seen;
  for (const auto& v : values) {
    if (!seen.insert(v).second) {
      throw ConfigError("categorical attribute '" + name +
                        "' repeats value '" + v + "'");
    }
  }
  return AttributeSpec(std::move(name), std::move(values));
}

std::optional<std::size_t> AttributeSpec::indexOf(std::string_view value) const {
  auto it = std::find(values_.begin(), values_.end(), value);
  if (it == values_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - values_.begin());
}

InstanceSchema::InstanceSchema(std::vector<AttributeSpec> attributes,
                               TargetSpec target, std::string relation)
    : attributes_(std::move(attributes)),
      target_(std::move(target)),
      relation_(std::move(relation)) {
  if (attributes_.empty()) throw ConfigError("schema has no attributes");
  std::unordered_set<std::string> names;
  for (const auto& a : attributes_) {
    if (!names.insert(a.name()).second) {
      throw ConfigError("duplicate attribute name '" + a.name() + "'");
    }
  }
  if (const auto* labels = std::get_if<ClassLabels>(&target_)) {
    if (labels->labels.size() < 2) {
      throw ConfigError("classification target needs at least two labels");
    }
  } else {
    const auto& range = std::get<NumericRange>(target_);
    if (!(range.min < range.max)) {
      throw ConfigError("numeric target range needs min < max");
    }
  }
}

std::optional<std::size_t> InstanceSchema::findAttribute(std::string_view name) const {
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].name() == name) return i;
  }
  return std::nullopt;
}

std::size_t InstanceSchema::classCount() const noexcept {
  if (const auto* labels = std::get_if<ClassLabels>(&target_)) {
    return labels->labels.size();
  }
  return 0;
}

const std::vector<std::string>& InstanceSchema::classLabels() const {
  if (const auto* labels = std::get_if<ClassLabels>(&target_)) return labels->labels;
  throw ConfigError("regression schema has no class labels");
}

NumericRange InstanceSchema::targetRange() const noexcept {
  if (const auto* range = std::get_if<NumericRange>(&target_)) return *range;
  return NumericRange{0.0, static_cast<double>(classCount() - 1)};
}

InstanceSchema InstanceSchema::asRegression() const {
  return InstanceSchema(attributes_, targetRange(), relation_);
}

void InstanceSchema::validate(const Instance& instance) const {
  if (instance.attributeCount() != attributes_.size()) {
    throw ConfigError("instance has " + std::to_string(instance.attributeCount()) +
                      " attributes, schema has " + std::to_string(attributes_.size()));
  }
  instance.forEachStored([&](std::size_t i, double v) {
    const auto& spec = attributes_[i];
    if (spec.isCategorical() && !isMissing(v)) {
      if (v < 0 || v >= static_cast<double>(spec.valueCount()) || v != std::floor(v)) {
        throw ConfigError("attribute '" + spec.name() + "' has invalid value index");
      }
    }
  });
  if (instance.hasLabel() && isClassification()) {
    double label = *instance.label();
    if (label < 0 || label >= static_cast<double>(classCount()) ||
        label != std::floor(label)) {
      throw ConfigError("label is not a valid class index");
    }
  }
}

}  // namespace streamforge
