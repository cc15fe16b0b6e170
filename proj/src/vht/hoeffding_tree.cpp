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

#include "streamforge/vht/hoeffding_tree.hpp"

namespace streamforge::vht {

HoeffdingTree::HoeffdingTree(std::shared_ptr<const InstanceSchema> schema, VhtConfig config)
    : schema_(schema), config_(config), model_(schema->classCount()), table_(schema) {
  config_.validate();
}

void HoeffdingTree::train(const Instance& instance, std::uint64_t index) {
  if (!instance.hasLabel() || instance.weight() <= 0.0) return;
  const std::size_t cls = instance.classIndex();
  const double w = instance.weight();
  LeafState& leaf = model_.sort(instance);
  leaf.distribution[cls] += w;
  leaf.seen += w;
  leaf.sawSparse = leaf.sawSparse || instance.isSparse();
  const std::uint64_t id = leaf.id;
  instance.forEachStored([&](std::size_t a, double v) {
    if (!isMissing(v)) table_.update(id, static_cast<std::uint32_t>(a), v, cls, w);
  });
  if (leaf.seen - leaf.seenAtLastCheck < config_.gracePeriod) return;
  leaf.seenAtLastCheck = leaf.seen;
  if (leaf.pure()) return;
  std::vector<LocalResult> results{table_.compute(id, leaf.distribution, config_.criterion, leaf.sawSparse)};
  const SplitSuggestion* chosen = nullptr;
  SplitDecision d = decideSplit(id, leaf.distribution, results, config_, model_.classCount(), &chosen);
  d.instanceIndex = index;
  decisions_.push_back(d);
  if (d.outcome == SplitOutcome::Split && chosen) {
    model_.split(id, *chosen);
    table_.drop(id);
  }
}

SequentialRun runSequential(HoeffdingTree& tree, StreamSource& source, std::uint64_t maxInstances) {
  SequentialRun run;
  while (run.instances < maxInstances) {
    auto inst = source.next();
    if (!inst) break;
    if (inst->hasLabel()) {
      run.correct += tree.predict(*inst) == inst->classIndex();
      ++run.instances;
    }
    tree.train(*inst, run.instances);
  }
  return run;
}

}  // namespace streamforge::vht
