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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "streamforge/instance/stream_source.hpp"

namespace streamforge {

struct ArffOptions {
  /// Target attribute by name; the last declared attribute when unset.
  std::optional<std::string> targetAttribute;
};

struct ArffData {
  InstanceSchema schema;
  std::vector<Instance> instances;
};

/// Parses a complete ARFF document. Errors carry the 1-based line number.
/// A numeric target gets the observed min/max as its range.
ArffData parseArff(std::string_view text, const ArffOptions& options = {});

/// Streams an ARFF file from disk; files ending in .gz are decompressed.
class ArffFileStream final : public StreamSource {
 public:
  explicit ArffFileStream(std::string path, ArffOptions options = {});
  ~ArffFileStream() override;
  ArffFileStream(const ArffFileStream&) = delete;
  ArffFileStream& operator=(const ArffFileStream&) = delete;

  const InstanceSchema& schema() const override;
  std::optional<Instance> next() override;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

}  // namespace streamforge
