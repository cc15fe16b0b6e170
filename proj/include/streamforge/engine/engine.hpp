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

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "streamforge/topology/topology.hpp"

namespace streamforge {

enum class ExecutionMode { Deterministic, Parallel };

struct EngineConfig {
  ExecutionMode mode = ExecutionMode::Deterministic;
  /// Parallel mode only. Overridden by STREAMFORGE_WORKERS when set.
  std::size_t workerCount = 1;
  /// Per-channel capacity in events (Parallel mode).
  std::size_t queueCapacity = 1024;
  std::uint64_t seed = 0;
  /// Deterministic mode: 0 polls sources only when the global queue is empty;
  /// n > 0 keeps polling while fewer than n source-emitted events are still
  /// undelivered, which delays feedback by about n source events while
  /// staying reproducible.
  std::size_t sourceWindow = 0;
  /// Record one TraceRecord per delivered event.
  bool trace = false;
  /// A blocked emitter raises DeadlockError after this long without any
  /// event being processed anywhere.
  std::chrono::milliseconds deadlockTimeout{10000};

  static EngineConfig deterministic(std::uint64_t seed = 0);
  static EngineConfig parallel(std::size_t workers, std::uint64_t seed = 0);
};

struct TraceRecord {
  std::uint32_t emitterProcessor = 0;
  std::uint32_t emitterInstance = 0;
  StreamId stream = 0;
  std::uint32_t destinationProcessor = 0;
  std::uint32_t destinationInstance = 0;
  /// Emission index on the (emitter instance, stream, destination instance) channel.
  std::uint64_t sequence = 0;

  bool operator==(const TraceRecord&) const = default;
};

struct SequenceViolation {
  TraceRecord previous;
  TraceRecord offending;
};

/// Per-channel ordering violations: a record whose sequence is below the
/// highest sequence already delivered on its channel.
std::vector<SequenceViolation> sequenceCheck(const std::vector<TraceRecord>& trace);

struct RunReport {
  ExecutionMode mode = ExecutionMode::Deterministic;
  std::size_t workers = 1;
  std::vector<std::string> streamNames;
  /// emit() calls per stream.
  std::vector<std::uint64_t> emitted;
  /// Non-terminal deliveries per stream, counting each destination instance.
  std::vector<std::uint64_t> delivered;
  /// Successful EntranceProcessor::produce calls.
  std::uint64_t sourceInstances = 0;
  double wallClockSeconds = 0.0;
  double throughput = 0.0;
  std::vector<TraceRecord> trace;

  std::uint64_t totalDelivered() const;
  static std::string csvHeader();
  std::string toCsvLine() const;
};

/// Runs a topology on local threads. Processor instances are created at
/// construction and remain inspectable after run().
class Engine {
 public:
  Engine(Topology topology, EngineConfig config);
  ~Engine();
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  /// Runs sources to exhaustion, then delivers one terminal event to every
  /// processor instance. May be called once.
  RunReport run();

  const Topology& topology() const;
  const EngineConfig& config() const;
  std::size_t instanceCount(ProcessorHandle h) const;
  Processor& instance(ProcessorHandle h, std::size_t i);

  template <class T>
  T& instanceAs(ProcessorHandle h, std::size_t i) {
    return dynamic_cast<T&>(instance(h, i));
  }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

RunReport runTopology(Topology topology, EngineConfig config);

}  // namespace streamforge
