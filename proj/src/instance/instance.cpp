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

#include "streamforge/instance/instance.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

#include "streamforge/common/error.hpp"
#include "streamforge/instance/schema.hpp"

namespace streamforge {

namespace {

void checkWeight(double weight) {
  if (!(weight >= 0.0)) throw ConfigError("instance weight must be non-negative");
}

bool sameValue(double a, double b) {
  if (isMissing(a) || isMissing(b)) return isMissing(a) && isMissing(b);
  return a == b;
}

}  // namespace

Instance Instance::dense(std::vector<double> values, std::optional<double> label,
                         double weight) {
  checkWeight(weight);
  Instance out;
  out.length_ = values.size();
  out.dense_ = std::move(values);
  out.label_ = label;
  out.weight_ = weight;
  return out;
}

Instance Instance::sparse(std::size_t length, std::vector<SparseEntry> entries,
                          std::optional<double> label, double weight) {
  checkWeight(weight);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].index >= length) {
      throw ConfigError("sparse index " + std::to_string(entries[i].index) +
                        " out of range " + std::to_string(length));
    }
    if (i > 0 && entries[i].index <= entries[i - 1].index) {
      throw ConfigError("sparse indices must be strictly increasing");
    }
  }
  Instance out;
  out.sparse_ = true;
  out.length_ = length;
  out.entries_ = std::move(entries);
  out.label_ = label;
  out.weight_ = weight;
  return out;
}

double Instance::value(std::size_t i) const {
  if (!sparse_) return dense_.at(i);
  auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                             [](const SparseEntry& e, std::size_t idx) {
                               return e.index < idx;
                             });
  if (it != entries_.end() && it->index == i) return it->value;
  return 0.0;
}

Instance Instance::withLabel(std::optional<double> label) const {
  Instance copy = *this;
  copy.label_ = label;
  return copy;
}

bool operator==(const Instance& a, const Instance& b) {
  if (a.sparse_ != b.sparse_ || a.length_ != b.length_ || a.weight_ != b.weight_ ||
      a.label_ != b.label_) {
    return false;
  }
  if (a.sparse_) {
    if (a.entries_.size() != b.entries_.size()) return false;
    for (std::size_t i = 0; i < a.entries_.size(); ++i) {
      if (a.entries_[i].index != b.entries_[i].index ||
          !sameValue(a.entries_[i].value, b.entries_[i].value)) {
        return false;
      }
    }
    return true;
  }
  for (std::size_t i = 0; i < a.dense_.size(); ++i) {
    if (!sameValue(a.dense_[i], b.dense_[i])) return false;
  }
  return true;
}

Instance toSparse(const Instance& instance, const InstanceSchema& schema) {
  if (instance.isSparse()) return instance;
  std::vector<SparseEntry> entries;
  auto values = instance.denseValues();
  for (std::size_t i = 0; i < values.size(); ++i) {
    double v = values[i];
    if (v == 0.0 && schema.attribute(i).isNumeric()) continue;
    entries.push_back({static_cast<std::uint32_t>(i), v});
  }
  return Instance::sparse(values.size(), std::move(entries), instance.label(),
                          instance.weight());
}

Instance toDense(const Instance& instance) {
  if (!instance.isSparse()) return instance;
  std::vector<double> values(instance.attributeCount(), 0.0);
  for (const auto& e : instance.sparseEntries()) values[e.index] = e.value;
  return Instance::dense(std::move(values), instance.label(), instance.weight());
}

}  // namespace streamforge
