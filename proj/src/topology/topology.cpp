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

#include "streamforge/topology/topology.hpp"

#include <algorithm>
#include <sstream>

#include "streamforge/common/error.hpp"

namespace streamforge {

const char* groupingName(Grouping g) noexcept {
  switch (g) {
    case Grouping::Shuffle:
      return "shuffle";
    case Grouping::Key:
      return "key";
    case Grouping::All:
      return "all";
  }
  return "?";
}

std::string Topology::canonicalForm() const {
  std::vector<std::string> lines;
  for (const auto& p : processors_) {
    lines.push_back("P " + p.name + " x" + std::to_string(p.parallelism) +
                    (p.entrance ? " entrance" : ""));
  }
  for (const auto& s : streams_) {
    std::vector<std::string> dests;
    for (const auto& d : s.destinations) {
      dests.push_back(processors_[d.processor.index].name + ":" + groupingName(d.grouping));
    }
    std::sort(dests.begin(), dests.end());
    std::string line = "S " + s.name + " " + processors_[s.source.index].name + " ->";
    for (const auto& d : dests) line += " " + d;
    lines.push_back(line);
  }
  std::sort(lines.begin(), lines.end());
  std::ostringstream out;
  out << name_ << '\n';
  for (const auto& l : lines) out << l << '\n';
  return out.str();
}

TopologyBuilder::TopologyBuilder(std::string name) { topology_.name_ = std::move(name); }

ProcessorHandle TopologyBuilder::addProcessor(std::shared_ptr<Processor> prototype,
                                              std::size_t parallelism, std::string name) {
  if (!prototype) throw ConfigError("null processor");
  if (parallelism < 1) throw ConfigError("parallelism must be at least 1");
  auto& procs = topology_.processors_;
  if (name.empty()) name = "p" + std::to_string(procs.size());
  for (const auto& p : procs) {
    if (p.prototype.get() == prototype.get()) {
      throw DuplicateProcessor("processor '" + p.name + "' is already registered");
    }
    if (p.name == name) throw DuplicateProcessor("duplicate processor name '" + name + "'");
  }
  bool entrance = dynamic_cast<const EntranceProcessor*>(prototype.get()) != nullptr;
  procs.push_back({std::move(name), std::move(prototype), parallelism, entrance});
  return ProcessorHandle{procs.size() - 1};
}

StreamHandle TopologyBuilder::createStream(ProcessorHandle source, std::string name) {
  check(source);
  auto& streams = topology_.streams_;
  if (name.empty()) {
    name = topology_.processors_[source.index].name + ".out" + std::to_string(streams.size());
  }
  streams.push_back({std::move(name), source, {}});
  return StreamHandle{static_cast<StreamId>(streams.size() - 1)};
}

void TopologyBuilder::connectInput(ProcessorHandle destination, StreamHandle stream,
                                   Grouping grouping) {
  check(destination);
  if (stream.id >= topology_.streams_.size()) {
    throw UnknownStream("unknown stream " + std::to_string(stream.id));
  }
  topology_.streams_[stream.id].destinations.push_back({destination, grouping});
}

std::size_t TopologyBuilder::parallelism(ProcessorHandle h) const {
  check(h);
  return topology_.processors_[h.index].parallelism;
}

Topology TopologyBuilder::build() {
  Topology out = std::move(topology_);
  topology_ = Topology{};
  topology_.name_ = out.name_;
  return out;
}

void TopologyBuilder::check(ProcessorHandle h) const {
  if (h.index >= topology_.processors_.size()) {
    throw UnknownProcessor("unknown processor handle " + std::to_string(h.index));
  }
}

}  // namespace streamforge
