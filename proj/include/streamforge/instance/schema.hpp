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
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace streamforge {

class Instance;

/// One input attribute: numeric, or categorical with a fixed value list.
class AttributeSpec {
 public:
  static AttributeSpec numeric(std::string name);
  /// Throws ConfigError when `values` is empty or has duplicates.
  static AttributeSpec categorical(std::string name, std::vector<std::string> values);

  const std::string& name() const noexcept { return name_; }
  bool isNumeric() const noexcept { return values_.empty(); }
  bool isCategorical() const noexcept { return !values_.empty(); }
  const std::vector<std::string>& values() const noexcept { return values_; }
  std::size_t valueCount() const noexcept { return values_.size(); }
  std::optional<std::size_t> indexOf(std::string_view value) const;

  bool operator==(const AttributeSpec&) const = default;

 private:
  AttributeSpec(std::string name, std::vector<std::string> values)
      : name_(std::move(name)), values_(std::move(values)) {}

  std::string name_;
  std::vector<std::string> values_;
};

struct ClassLabels {
  std::vector<std::string> labels;
  bool operator==(const ClassLabels&) const = default;
};

/// Target range of a regression stream; used to normalize errors.
struct NumericRange {
  double min = 0.0;
  double max = 1.0;
  double span() const noexcept { return max - min; }
  bool operator==(const NumericRange&) const = default;
};

using TargetSpec = std::variant<ClassLabels, NumericRange>;

class InstanceSchema {
 public:
  /// Validates: at least one attribute, unique names, >= 2 class labels or
  /// min < max for a numeric target.
  InstanceSchema(std::vector<AttributeSpec> attributes, TargetSpec target,
                 std::string relation = {});

  const std::vector<AttributeSpec>& attributes() const noexcept { return attributes_; }
  std::size_t attributeCount() const noexcept { return attributes_.size(); }
  const AttributeSpec& attribute(std::size_t i) const { return attributes_.at(i); }
  std::optional<std::size_t> findAttribute(std::string_view name) const;

  const TargetSpec& target() const noexcept { return target_; }
  bool isClassification() const noexcept {
    return std::holds_alternative<ClassLabels>(target_);
  }
  std::size_t classCount() const noexcept;
  const std::vector<std::string>& classLabels() const;
  /// For classification streams the range of class indices.
  NumericRange targetRange() const noexcept;
  const std::string& relation() const noexcept { return relation_; }

  /// Same attributes, class index reinterpreted as a numeric target.
  InstanceSchema asRegression() const;

  /// Throws ConfigError when `instance` does not conform.
  void validate(const Instance& instance) const;

  bool operator==(const InstanceSchema&) const = default;

 private:
  std::vector<AttributeSpec> attributes_;
  TargetSpec target_;
  std::string relation_;
};

}  // namespace streamforge
