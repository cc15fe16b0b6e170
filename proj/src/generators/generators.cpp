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

#include "streamforge/generators/generators.hpp"

#include <algorithm>
#include <cmath>

#include "streamforge/common/error.hpp"

namespace streamforge {

namespace {

InstanceSchema treeSchema(const RandomTreeConfig& c) {
  if (c.categoricalCount + c.numericCount < 1) throw ConfigError("random tree needs at least one attribute");
  if (c.valuesPerCategorical < 2) throw ConfigError("valuesPerCategorical must be at least 2");
  if (c.classCount < 2) throw ConfigError("classCount must be at least 2");
  if (c.maxDepth < 1) throw ConfigError("maxDepth must be at least 1");
  std::vector<AttributeSpec> attrs;
  std::vector<std::string> values;
  for (std::size_t v = 0; v < c.valuesPerCategorical; ++v) values.push_back("v" + std::to_string(v));
  for (std::size_t i = 0; i < c.categoricalCount; ++i) {
    attrs.push_back(AttributeSpec::categorical("nominal" + std::to_string(i), values));
  }
  for (std::size_t i = 0; i < c.numericCount; ++i) {
    attrs.push_back(AttributeSpec::numeric("numeric" + std::to_string(i)));
  }
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < c.classCount; ++k) labels.push_back("class" + std::to_string(k));
  return InstanceSchema(std::move(attrs), ClassLabels{labels}, "randomTree");
}

}  // namespace

RandomTreeGenerator::RandomTreeGenerator(RandomTreeConfig config)
    : config_(config), schema_(treeSchema(config)), rng_(config.seed) {
  const std::size_t m = config_.categoricalCount + config_.numericCount;
  depth_ = std::min(config_.maxDepth, m);
  std::mt19937_64 treeRng(config_.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> all(m);
  for (std::size_t i = 0; i < m; ++i) all[i] = i;
  std::size_t leafCounter = 0;
  grow(std::move(all), 0, treeRng, leafCounter);
}

std::size_t RandomTreeGenerator::grow(std::vector<std::size_t> available, std::size_t level,
                                      std::mt19937_64& rng, std::size_t& leafCounter) {
  const std::size_t id = nodes_.size();
  nodes_.emplace_back();
  if (level == depth_) {
    nodes_[id].leaf = true;
    nodes_[id].label = leafCounter++ % config_.classCount;
    return id;
  }
  std::uniform_int_distribution<std::size_t> pick(0, available.size() - 1);
  const std::size_t k = pick(rng);
  const std::size_t attribute = available[k];
  available.erase(available.begin() + static_cast<std::ptrdiff_t>(k));
  const bool categorical = attribute < config_.categoricalCount;
  double threshold = 0.5;
  if (!categorical && level + 1 < depth_) threshold = std::uniform_real_distribution<double>(0.2, 0.8)(rng);
  const std::size_t branches = categorical ? config_.valuesPerCategorical : 2;
  nodes_[id].attribute = attribute;
  nodes_[id].threshold = threshold;
  std::vector<std::size_t> children;
  for (std::size_t b = 0; b < branches; ++b) children.push_back(grow(available, level + 1, rng, leafCounter));
  nodes_[id].children = std::move(children);
  return id;
}

std::size_t RandomTreeGenerator::classify(const std::vector<double>& values) const {
  std::size_t n = 0;
  while (!nodes_[n].leaf) {
    const Node& node = nodes_[n];
    std::size_t branch;
    if (node.attribute < config_.categoricalCount) {
      branch = static_cast<std::size_t>(values[node.attribute]);
    } else {
      branch = values[node.attribute] < node.threshold ? 0 : 1;
    }
    n = node.children[branch];
  }
  return nodes_[n].label;
}

std::optional<Instance> RandomTreeGenerator::next() {
  const std::size_t m = config_.categoricalCount + config_.numericCount;
  std::vector<double> values(m);
  std::uniform_int_distribution<std::size_t> category(0, config_.valuesPerCategorical - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < config_.categoricalCount; ++i) values[i] = static_cast<double>(category(rng_));
  for (std::size_t i = config_.categoricalCount; i < m; ++i) values[i] = unit(rng_);
  auto label = static_cast<double>(classify(values));
  return Instance::dense(std::move(values), label);
}

namespace {

InstanceSchema tweetSchema(const TweetConfig& c) {
  if (c.vocabularySize < 1) throw ConfigError("vocabulary size must be at least 1");
  if (!(c.zipfSkew > 1.0)) throw ConfigError("zipf skew must exceed 1");
  if (!(c.meanWords > 0.0) || c.sdWords < 0.0) throw ConfigError("invalid tweet length distribution");
  std::vector<AttributeSpec> attrs;
  attrs.reserve(c.vocabularySize);
  for (std::size_t i = 0; i < c.vocabularySize; ++i) attrs.push_back(AttributeSpec::numeric("w" + std::to_string(i)));
  return InstanceSchema(std::move(attrs), ClassLabels{{"class0", "class1"}}, "randomTweet");
}

}  // namespace

RandomTweetGenerator::RandomTweetGenerator(TweetConfig config)
    : config_(config), schema_(tweetSchema(config)), rng_(config.seed) {
  const std::size_t d = config_.vocabularySize;
  cdf_.resize(d);
  double total = 0.0;
  for (std::size_t r = 1; r <= d; ++r) {
    total += std::pow(static_cast<double>(r), -config_.zipfSkew);
    cdf_[r - 1] = total;
  }
  for (auto& c : cdf_) c /= total;
  cdf_.back() = 1.0;
}

double RandomTweetGenerator::rankProbability(std::size_t rank) const {
  if (rank < 1 || rank > cdf_.size()) return 0.0;
  return rank == 1 ? cdf_[0] : cdf_[rank - 1] - cdf_[rank - 2];
}

std::optional<Instance> RandomTweetGenerator::next() {
  const std::size_t d = config_.vocabularySize;
  const std::size_t label = std::bernoulli_distribution(0.5)(rng_) ? 1 : 0;
  const double drawn = std::round(std::normal_distribution<double>(config_.meanWords, config_.sdWords)(rng_));
  const auto length = static_cast<std::size_t>(std::max(1.0, drawn));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::uint32_t> words;
  words.reserve(length);
  for (std::size_t k = 0; k < length; ++k) {
    const double u = unit(rng_);
    const auto rank = static_cast<std::size_t>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin()) + 1;
    const std::size_t r = std::min(rank, d);
    words.push_back(static_cast<std::uint32_t>(label == 0 ? r - 1 : d - r));
  }
  std::sort(words.begin(), words.end());
  std::vector<SparseEntry> entries;
  for (auto w : words) {
    if (!entries.empty() && entries.back().index == w) {
      entries.back().value += 1.0;
    } else {
      entries.push_back({w, 1.0});
    }
  }
  return Instance::sparse(d, std::move(entries), static_cast<double>(label));
}

namespace {

constexpr double kWaves[3][21] = {
    {0, 1, 2, 3, 4, 5, 6, 5, 4, 3, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 2, 3, 4, 5, 6, 5, 4, 3, 2, 1, 0},
    {0, 0, 0, 0, 0, 1, 2, 3, 4, 5, 6, 5, 4, 3, 2, 1, 0, 0, 0, 0, 0},
};

InstanceSchema waveformSchema(const WaveformConfig& c) {
  if (c.baseAttributes != 21) throw ConfigError("waveform has exactly 21 base attributes");
  std::vector<AttributeSpec> attrs;
  for (std::size_t i = 0; i < c.baseAttributes + c.noiseAttributes; ++i) {
    attrs.push_back(AttributeSpec::numeric("att" + std::to_string(i + 1)));
  }
  return InstanceSchema(std::move(attrs), ClassLabels{{"class1", "class2", "class3"}}, "waveform");
}

}  // namespace

WaveformGenerator::WaveformGenerator(WaveformConfig config)
    : config_(config), schema_(waveformSchema(config)), rng_(config.seed) {}

std::optional<Instance> WaveformGenerator::next() {
  static constexpr int kPairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  const int choice = std::uniform_int_distribution<int>(0, 2)(rng_);
  const double a = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
  const double b = 1.0 - a;
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> values(config_.baseAttributes + config_.noiseAttributes);
  for (std::size_t i = 0; i < config_.baseAttributes; ++i) {
    values[i] = a * kWaves[kPairs[choice][0]][i] + b * kWaves[kPairs[choice][1]][i] + noise(rng_);
  }
  for (std::size_t i = config_.baseAttributes; i < values.size(); ++i) values[i] = noise(rng_);
  return Instance::dense(std::move(values), static_cast<double>(choice));
}

LimitedSource::LimitedSource(std::unique_ptr<StreamSource> inner, std::uint64_t limit)
    : inner_(std::move(inner)), remaining_(limit) {}

std::optional<Instance> LimitedSource::next() {
  if (remaining_ == 0) return std::nullopt;
  auto inst = inner_->next();
  if (inst) --remaining_;
  return inst;
}

}  // namespace streamforge
