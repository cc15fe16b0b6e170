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

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "streamforge/cli/task_spec.hpp"
#include "streamforge/engine/engine.hpp"
#include "streamforge/eval/learner.hpp"
#include "streamforge/instance/stream_source.hpp"

namespace streamforge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Global flags that precede the task string.
struct RunOptions {
  ExecutionMode mode = ExecutionMode::Deterministic;
  std::size_t workers = 1;
  std::optional<std::uint64_t> seed;
  std::string outputDir = ".";
};

struct BuiltLearner {
  std::shared_ptr<Learner> learner;
  /// The learner predicts a numeric target; nominal targets are read as
  /// their class index.
  bool regression = false;
};

/// Throws ConfigError naming the valid learners or flags.
BuiltLearner makeLearner(const ComponentSpec& spec);

/// `defaultSeed` applies to generators whose spec has no -r flag.
SourceFactory makeSource(const ComponentSpec& spec, std::uint64_t defaultSeed);

/// Tasks, learners and streams with their flags, one per line.
std::string listComponents();

/// Runs a parsed PrequentialEvaluation task, writes the CSV atomically into
/// `options.outputDir` and returns its path. The final row is printed to
/// `out`.
std::string dispatch(const TaskSpec& task, const RunOptions& options, std::ostream& out);

/// `streamforge run [-mode det|par] [-workers N] [-seed S] [-o DIR] "<task>"`
/// or `streamforge list`. Returns the process exit code.
int runMain(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace streamforge::cli
