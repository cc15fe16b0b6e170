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

#include "streamforge/instance/stream_source.hpp"

namespace streamforge {

VectorSource::VectorSource(InstanceSchema schema, std::vector<Instance> instances)
    : schema_(std::make_shared<const InstanceSchema>(std::move(schema))),
      instances_(std::make_shared<const std::vector<Instance>>(std::move(instances))) {}

VectorSource::VectorSource(std::shared_ptr<const InstanceSchema> schema,
                           std::shared_ptr<const std::vector<Instance>> instances)
    : schema_(std::move(schema)), instances_(std::move(instances)) {}

std::optional<Instance> VectorSource::next() {
  if (position_ >= instances_->size()) return std::nullopt;
  return (*instances_)[position_++];
}

SourceFactory VectorSource::factory() const {
  return [schema = schema_, instances = instances_] {
    return std::make_unique<VectorSource>(schema, instances);
  };
}

RegressionView::RegressionView(std::unique_ptr<StreamSource> inner)
    : inner_(std::move(inner)), schema_(inner_->schema().asRegression()) {}

}  // namespace streamforge
