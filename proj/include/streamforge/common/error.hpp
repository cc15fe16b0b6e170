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
#include <stdexcept>
#include <string>

namespace streamforge {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input. `position()` is a line number for ARFF input and a
/// character offset for task strings.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class TopologyError : public Error {
 public:
  using Error::Error;
};

class DuplicateProcessor : public TopologyError {
 public:
  using TopologyError::TopologyError;
};

class UnknownProcessor : public TopologyError {
 public:
  using TopologyError::TopologyError;
};

class UnknownStream : public TopologyError {
 public:
  using TopologyError::TopologyError;
};

/// A key-grouped connection received an event without a routing key.
class RoutingError : public Error {
 public:
  using Error::Error;
};

/// The parallel engine stopped making progress while emitters were blocked.
class DeadlockError : public Error {
 public:
  using Error::Error;
};

}  // namespace streamforge
