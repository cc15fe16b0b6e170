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
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "streamforge/instance/instance.hpp"
#include "streamforge/instance/schema.hpp"

namespace streamforge {

/// Single-consumer producer of instances conforming to schema().
class StreamSource {
 public:
  virtual ~StreamSource() = default;
  virtual const InstanceSchema& schema() const = 0;
  /// Next instance, or nullopt at end of stream.
  virtual std::optional<Instance> next() = 0;
};

/// Builds a fresh source positioned at the start of its stream.
using SourceFactory = std::function<std::unique_ptr<StreamSource>()>;

/// Replays an in-memory instance list; copies share the underlying data.
class VectorSource final : public StreamSource {
 public:
  VectorSource(InstanceSchema schema, std::vector<Instance> instances);
  VectorSource(std::shared_ptr<const InstanceSchema> schema,
               std::shared_ptr<const std::vector<Instance>> instances);

  const InstanceSchema& schema() const override { return *schema_; }
  std::optional<Instance> next() override;

  SourceFactory factory() const;

 private:
  std::shared_ptr<const InstanceSchema> schema_;
  std::shared_ptr<const std::vector<Instance>> instances_;
  std::size_t position_ = 0;
};

/// Wraps another source, relabelling class targets as numeric targets.
class RegressionView final : public StreamSource {
 public:
  explicit RegressionView(std::unique_ptr<StreamSource> inner);
  const InstanceSchema& schema() const override { return schema_; }
  std::optional<Instance> next() override { return inner_->next(); }

 private:
  std::unique_ptr<StreamSource> inner_;
  InstanceSchema schema_;
};

}  // namespace streamforge
