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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace streamforge {

class InstanceSchema;

/// Marker stored in place of an unknown attribute value.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool isMissing(double value) noexcept { return std::isnan(value); }

struct SparseEntry {
  std::uint32_t index = 0;
  double value = 0.0;
};

/// One stream element. Categorical values are stored as value indices.
/// Immutable after construction.
class Instance {
 public:
  static Instance dense(std::vector<double> values,
                        std::optional<double> label = std::nullopt,
                        double weight = 1.0);
  /// `entries` must have strictly increasing indices below `length`.
  static Instance sparse(std::size_t length, std::vector<SparseEntry> entries,
                         std::optional<double> label = std::nullopt,
                         double weight = 1.0);

  bool isSparse() const noexcept { return sparse_; }
  std::size_t attributeCount() const noexcept { return length_; }
  /// Value of attribute `i`; absent sparse entries read as 0.
  double value(std::size_t i) const;

  std::span<const double> denseValues() const noexcept { return dense_; }
  std::span<const SparseEntry> sparseEntries() const noexcept { return entries_; }

  bool hasLabel() const noexcept { return label_.has_value(); }
  const std::optional<double>& label() const noexcept { return label_; }
  std::size_t classIndex() const { return static_cast<std::size_t>(label_.value()); }
  double weight() const noexcept { return weight_; }

  Instance withLabel(std::optional<double> label) const;

  /// Calls f(attributeIndex, value) for every stored value: all attributes of
  /// a dense instance, only the explicit entries of a sparse one.
  template <class F>
  void forEachStored(F&& f) const {
    if (sparse_) {
      for (const auto& e : entries_) f(static_cast<std::size_t>(e.index), e.value);
    } else {
      for (std::size_t i = 0; i < dense_.size(); ++i) f(i, dense_[i]);
    }
  }

  /// Missing markers compare equal to each other.
  friend bool operator==(const Instance& a, const Instance& b);

 private:
  Instance() = default;

  bool sparse_ = false;
  std::size_t length_ = 0;
  std::vector<double> dense_;
  std::vector<SparseEntry> entries_;
  std::optional<double> label_;
  double weight_ = 1.0;
};

/// Drops zero-valued numeric attributes; categorical values and missing
/// markers are kept. Label and weight are preserved.
Instance toSparse(const Instance& instance, const InstanceSchema& schema);
Instance toDense(const Instance& instance);

}  // namespace streamforge
