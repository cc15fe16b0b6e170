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
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "streamforge/topology/processor.hpp"

namespace streamforge {

enum class Grouping { Shuffle, Key, All };

const char* groupingName(Grouping g) noexcept;

struct ProcessorHandle {
  std::size_t index = 0;
  bool operator==(const ProcessorHandle&) const = default;
};

struct StreamHandle {
  StreamId id = 0;
  bool operator==(const StreamHandle&) const = default;
};

struct Destination {
  ProcessorHandle processor;
  Grouping grouping = Grouping::Shuffle;
};

struct StreamDescriptor {
  std::string name;
  ProcessorHandle source;
  std::vector<Destination> destinations;
};

struct ProcessorDescriptor {
  std::string name;
  std::shared_ptr<const Processor> prototype;
  std::size_t parallelism = 1;
  bool entrance = false;
};

/// Immutable processor graph. Cycles are allowed.
class Topology {
 public:
  const std::string& name() const noexcept { return name_; }
  const std::vector<ProcessorDescriptor>& processors() const noexcept { return processors_; }
  const std::vector<StreamDescriptor>& streams() const noexcept { return streams_; }
  const ProcessorDescriptor& processor(ProcessorHandle h) const { return processors_.at(h.index); }
  const StreamDescriptor& stream(StreamHandle h) const { return streams_.at(h.id); }

  /// Name-based description independent of registration order; equal for
  /// isomorphic topologies.
  std::string canonicalForm() const;

 private:
  friend class TopologyBuilder;
  std::string name_;
  std::vector<ProcessorDescriptor> processors_;
  std::vector<StreamDescriptor> streams_;
};

/// Bookkeeping for assembling a Topology.
class TopologyBuilder {
 public:
  explicit TopologyBuilder(std::string name = "topology");

  /// Registers a processor prototype. Throws DuplicateProcessor when the same
  /// prototype or name is added twice, ConfigError when parallelism is 0.
  ProcessorHandle addProcessor(std::shared_ptr<Processor> prototype, std::size_t parallelism = 1,
                               std::string name = {});
  StreamHandle createStream(ProcessorHandle source, std::string name = {});
  void connectInput(ProcessorHandle destination, StreamHandle stream, Grouping grouping);
  void connectInputShuffle(ProcessorHandle d, StreamHandle s) { connectInput(d, s, Grouping::Shuffle); }
  void connectInputKey(ProcessorHandle d, StreamHandle s) { connectInput(d, s, Grouping::Key); }
  void connectInputAll(ProcessorHandle d, StreamHandle s) { connectInput(d, s, Grouping::All); }

  std::size_t parallelism(ProcessorHandle h) const;

  /// Finalizes; the builder is left empty.
  Topology build();

 private:
  void check(ProcessorHandle h) const;

  Topology topology_;
};

/// Named, parameterized assembly of a topology (e.g. prequential evaluation).
class Task {
 public:
  virtual ~Task() = default;
  virtual std::string name() const = 0;
  virtual Topology buildTopology() = 0;
};

}  // namespace streamforge
