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
#include <cstdint>
#include <memory>

#include "streamforge/topology/content_event.hpp"

namespace streamforge {

using StreamId = std::uint32_t;

/// Handed to Processor::process; the only way a processor talks to the rest
/// of the topology.
class Emitter {
 public:
  virtual ~Emitter() = default;
  virtual void emit(StreamId stream, ContentEvent event) = 0;
};

/// Container for algorithm code. The engine clones the registered prototype
/// once per parallel instance and never invokes one instance concurrently.
class Processor {
 public:
  virtual ~Processor() = default;

  virtual void onCreate(std::size_t /*instanceId*/, std::size_t /*totalInstances*/) {}
  virtual void process(const ContentEvent& event, Emitter& out) = 0;
  virtual std::unique_ptr<Processor> clone() const = 0;
};

/// A processor that injects events into the topology.
class EntranceProcessor : public Processor {
 public:
  /// Emits the next event(s); false once exhausted.
  virtual bool produce(Emitter& out) = 0;
  void process(const ContentEvent& /*event*/, Emitter& /*out*/) override {}
};

}  // namespace streamforge
