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

#include "streamforge/vht/tree.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>

#include "streamforge/common/error.hpp"

namespace streamforge::vht {

void VhtConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must be in (0,1)");
  if (!(tieThreshold > 0.0)) throw ConfigError("tie threshold must be positive");
  if (!(gracePeriod >= 1.0)) throw ConfigError("grace period must be at least 1");
  if (parallelism < 1) throw ConfigError("statistics parallelism must be at least 1");
}

std::uint64_t VhtConfig::effectiveSplitTimeout() const {
  return splitTimeout > 0 ? splitTimeout : 10 * static_cast<std::uint64_t>(parallelism);
}

bool LeafState::pure() const {
  std::size_t nonZero = 0;
  for (double c : distribution) nonZero += c > 0.0;
  return nonZero <= 1;
}

std::size_t majorityClass(std::span<const double> distribution) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < distribution.size(); ++k) {
    if (distribution[k] > distribution[best]) best = k;
  }
  return best;
}

TreeModel::TreeModel(std::size_t classCount) : classCount_(classCount) {
  newLeaf(std::vector<double>(classCount, 0.0));
}

std::size_t TreeModel::newLeaf(std::vector<double> distribution) {
  distribution.resize(classCount_, 0.0);
  Node node;
  node.state.id = nextLeafId_++;
  double total = 0.0;
  for (double c : distribution) total += c;
  node.state.distribution = std::move(distribution);
  node.state.seen = total;
  node.state.seenAtLastCheck = total;
  nodes_.push_back(std::move(node));
  leafNode_[nodes_.back().state.id] = nodes_.size() - 1;
  return nodes_.size() - 1;
}

std::size_t TreeModel::descend(const Instance& instance) const {
  std::size_t n = 0;
  while (!nodes_[n].leaf) {
    const Node& node = nodes_[n];
    auto b = node.test.branch(instance);
    n = node.children[b ? *b : node.heaviest];
  }
  return n;
}

LeafState& TreeModel::sort(const Instance& instance) { return nodes_[descend(instance)].state; }
const LeafState& TreeModel::sort(const Instance& instance) const { return nodes_[descend(instance)].state; }

LeafState& TreeModel::leaf(std::uint64_t leafId) { return nodes_.at(leafNode_.at(leafId)).state; }

std::size_t TreeModel::predict(const Instance& instance) const {
  return majorityClass(sort(instance).predictive());
}

std::vector<std::uint64_t> TreeModel::split(std::uint64_t leafId, const SplitSuggestion& split) {
  const std::size_t at = leafNode_.at(leafId);
  std::vector<std::size_t> children;
  std::vector<std::uint64_t> ids;
  std::size_t heaviest = 0;
  double heaviestMass = -1.0;
  for (std::size_t b = 0; b < split.test.branches; ++b) {
    std::vector<double> dist = b < split.branchDistributions.size() ? split.branchDistributions[b]
                                                                     : std::vector<double>{};
    double mass = 0.0;
    for (double c : dist) mass += c;
    if (mass > heaviestMass) {
      heaviestMass = mass;
      heaviest = b;
    }
    children.push_back(newLeaf(std::move(dist)));
    ids.push_back(nodes_.back().state.id);
  }
  Node& node = nodes_[at];
  node.leaf = false;
  node.test = split.test;
  node.children = std::move(children);
  node.heaviest = heaviest;
  node.state = LeafState{};
  leafNode_.erase(leafId);
  return ids;
}

std::size_t TreeModel::depth() const {
  std::function<std::size_t(std::size_t)> d = [&](std::size_t n) -> std::size_t {
    if (nodes_[n].leaf) return 0;
    std::size_t m = 0;
    for (auto c : nodes_[n].children) m = std::max(m, d(c));
    return m + 1;
  };
  return d(0);
}

std::string TreeModel::digest() const {
  std::string out;
  char buf[64];
  std::function<void(std::size_t)> walk = [&](std::size_t n) {
    const Node& node = nodes_[n];
    if (node.leaf) {
      out += "L" + std::to_string(node.state.id) + "[";
      for (std::size_t k = 0; k < node.state.distribution.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%s%.17g", k ? "," : "", node.state.distribution[k]);
        out += buf;
      }
      out += "]";
      return;
    }
    std::snprintf(buf, sizeof buf, "%.17g", node.test.threshold);
    out += "S(" + std::to_string(node.test.attribute) + (node.test.numeric ? "<=" + std::string(buf) : "=*") + "){";
    for (auto c : node.children) walk(c);
    out += "}";
  };
  walk(0);
  return out;
}

const char* outcomeName(SplitOutcome o) noexcept {
  switch (o) {
    case SplitOutcome::Split:
      return "split";
    case SplitOutcome::NoSplit:
      return "no-split";
    case SplitOutcome::PrePruned:
      return "pre-pruned";
  }
  return "?";
}

SplitDecision decideSplit(std::uint64_t leafId, std::span<const double> preSplit,
                          const std::vector<LocalResult>& results, const VhtConfig& config,
                          std::size_t classCount, const SplitSuggestion** chosen) {
  SplitDecision d;
  d.leafId = leafId;
  d.results = results.size();
  for (double c : preSplit) d.n += c;
  if (chosen) *chosen = nullptr;

  std::vector<Candidate> pool{Candidate{}};
  for (const auto& r : results) {
    if (r.empty) continue;
    if (!r.best.isNull()) pool.push_back(r.best);
    if (!r.second.isNull()) pool.push_back(r.second);
  }
  std::sort(pool.begin(), pool.end(), ranksBefore);
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  d.best = pool[0];
  d.second = pool.size() > 1 ? pool[1] : Candidate{};
  d.deltaG = d.best.merit - d.second.merit;
  d.epsilon = hoeffdingBound(meritRange(config.criterion, classCount), config.delta, std::max(d.n, 1.0));
  if (d.best.isNull()) {
    d.outcome = SplitOutcome::PrePruned;
  } else if (d.deltaG > d.epsilon || d.epsilon < config.tieThreshold) {
    d.outcome = SplitOutcome::Split;
    if (chosen) {
      for (const auto& r : results) {
        if (!r.empty && r.best == d.best && r.bestSplit) {
          *chosen = &*r.bestSplit;
          break;
        }
      }
    }
  } else {
    d.outcome = SplitOutcome::NoSplit;
  }
  return d;
}

}  // namespace streamforge::vht
