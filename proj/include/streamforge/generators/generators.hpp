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
#include <optional>
#include <random>
#include <vector>

#include "streamforge/instance/stream_source.hpp"

namespace streamforge {

struct RandomTreeConfig {
  std::size_t categoricalCount = 10;
  std::size_t numericCount = 10;
  std::size_t valuesPerCategorical = 2;
  std::size_t maxDepth = 5;
  std::size_t classCount = 2;
  std::uint64_t seed = 1;
};

/// Dense labelled stream whose labels come from a fixed random decision
/// tree. Categorical attributes come first, then numeric ones in [0,1).
///
/// The concept tree tests each attribute at most once along a path and has
/// all leaves at depth min(maxDepth, attributeCount). Every node just above
/// the leaves splits its region into equal-probability halves (threshold
/// 0.5, or one branch per categorical value) with alternating leaf classes,
/// so the two classes are exactly balanced when valuesPerCategorical is even.
class RandomTreeGenerator final : public StreamSource {
 public:
  explicit RandomTreeGenerator(RandomTreeConfig config);

  const InstanceSchema& schema() const override { return schema_; }
  std::optional<Instance> next() override;

  /// Label the concept assigns to `values`.
  std::size_t classify(const std::vector<double>& values) const;
  std::size_t conceptDepth() const noexcept { return depth_; }
  /// Attribute tested at the concept root.
  std::size_t rootAttribute() const { return nodes_.front().attribute; }

 private:
  struct Node {
    bool leaf = false;
    std::size_t attribute = 0;
    double threshold = 0.5;
    std::size_t label = 0;
    std::vector<std::size_t> children;
  };
  std::size_t grow(std::vector<std::size_t> available, std::size_t level, std::mt19937_64& rng,
                   std::size_t& leafCounter);

  RandomTreeConfig config_;
  InstanceSchema schema_;
  std::vector<Node> nodes_;
  std::size_t depth_ = 0;
  std::mt19937_64 rng_;
};

struct TweetConfig {
  std::size_t vocabularySize = 1000;
  double meanWords = 15.0;
  double sdWords = 1.0;
  double zipfSkew = 1.5;
  std::uint64_t seed = 1;
};

/// Sparse bag-of-words stream. Each tweet draws its length from a rounded
/// Gaussian (at least 1) and each word's rank from Zipf(skew); class 0 maps
/// rank r to word r-1, class 1 to word D-r. Values are term counts.
class RandomTweetGenerator final : public StreamSource {
 public:
  explicit RandomTweetGenerator(TweetConfig config);

  const InstanceSchema& schema() const override { return schema_; }
  std::optional<Instance> next() override;

  /// Probability of Zipf rank r (1-based).
  double rankProbability(std::size_t rank) const;

 private:
  TweetConfig config_;
  InstanceSchema schema_;
  std::vector<double> cdf_;
  std::mt19937_64 rng_;
};

struct WaveformConfig {
  std::uint64_t seed = 1;
  std::size_t baseAttributes = 21;
  std::size_t noiseAttributes = 19;
};

/// Waveform-21 with 19 extra noise attributes: a uniform class picks two of
/// three triangular base waves, mixed with a uniform weight plus N(0,1) noise.
class WaveformGenerator final : public StreamSource {
 public:
  explicit WaveformGenerator(WaveformConfig config);

  const InstanceSchema& schema() const override { return schema_; }
  std::optional<Instance> next() override;

 private:
  WaveformConfig config_;
  InstanceSchema schema_;
  std::mt19937_64 rng_;
};

/// Wraps a source and stops after `limit` instances.
class LimitedSource final : public StreamSource {
 public:
  LimitedSource(std::unique_ptr<StreamSource> inner, std::uint64_t limit);
  const InstanceSchema& schema() const override { return inner_->schema(); }
  std::optional<Instance> next() override;

 private:
  std::unique_ptr<StreamSource> inner_;
  std::uint64_t remaining_;
};

}  // namespace streamforge
