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

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "streamforge/generators/generators.hpp"

namespace sf = streamforge;

TEST(RandomTree, Balanced) {
  sf::RandomTreeGenerator gen(sf::RandomTreeConfig{});
  std::size_t ones = 0;
  const std::size_t n = 200000;
  for (std::size_t i = 0; i < n; ++i) ones += gen.next()->classIndex();
  EXPECT_NEAR(static_cast<double>(ones) / n, 0.5, 0.01);
}

TEST(RandomTree, SeededDeterminism) {
  sf::RandomTreeConfig cfg;
  cfg.seed = 42;
  sf::RandomTreeGenerator a(cfg), b(cfg);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(*a.next(), *b.next());
  cfg.seed = 43;
  sf::RandomTreeGenerator c(cfg);
  sf::RandomTreeGenerator d(sf::RandomTreeConfig{.seed = 42});
  int differ = 0;
  for (int i = 0; i < 100; ++i) differ += !(*c.next() == *d.next());
  EXPECT_GT(differ, 0);
}

TEST(RandomTree, DepthOneIsAStump) {
  // Exhaustive stump search: for every attribute and every threshold on a
  // grid (or every categorical value), pick the rule with best agreement.
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    sf::RandomTreeConfig cfg;
    cfg.maxDepth = 1;
    cfg.seed = seed;
    sf::RandomTreeGenerator gen(cfg);
    std::vector<sf::Instance> data;
    for (int i = 0; i < 5000; ++i) data.push_back(*gen.next());
    double best = 0.0;
    for (std::size_t a = 0; a < 20; ++a) {
      for (int t = 1; t < 20; ++t) {
        const double thr = a < 10 ? 0.5 : t / 20.0;
        std::size_t agree = 0;
        for (const auto& x : data) agree += (x.value(a) < thr ? 0u : 1u) == x.classIndex();
        const double acc = static_cast<double>(agree) / data.size();
        best = std::max({best, acc, 1.0 - acc});
      }
    }
    EXPECT_GE(best, 0.99);
  }
}

TEST(Tweet, LengthAndIndices) {
  sf::RandomTweetGenerator gen(sf::TweetConfig{.vocabularySize = 100});
  double words = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    auto t = *gen.next();
    ASSERT_TRUE(t.isSparse());
    std::int64_t prev = -1;
    for (const auto& e : t.sparseEntries()) {
      ASSERT_GT(static_cast<std::int64_t>(e.index), prev);
      ASSERT_LT(e.index, 100u);
      prev = e.index;
      words += e.value;
    }
  }
  EXPECT_NEAR(words / n, 15.0, 0.2);
}

TEST(Tweet, TopRankProbability) {
  sf::TweetConfig cfg{.vocabularySize = 100};
  sf::RandomTweetGenerator gen(cfg);
  double norm = 0.0;
  for (int k = 1; k <= 100; ++k) norm += std::pow(k, -1.5);
  EXPECT_NEAR(gen.rankProbability(1), 1.0 / norm, 1e-12);
  // Chi-square on the top rank: count draws of rank 1 versus all others.
  double top = 0, total = 0;
  for (int i = 0; i < 50000; ++i) {
    auto t = *gen.next();
    const std::uint32_t rank1 = t.label() == 0.0 ? 0u : 99u;
    for (const auto& e : t.sparseEntries()) {
      total += e.value;
      if (e.index == rank1) top += e.value;
    }
  }
  const double p = 1.0 / norm;
  const double expTop = total * p, expRest = total * (1 - p);
  const double chi2 = (top - expTop) * (top - expTop) / expTop +
                      ((total - top) - expRest) * ((total - top) - expRest) / expRest;
  EXPECT_LT(chi2, 10.83);  // p = 0.001, one degree of freedom
}

TEST(Waveform, ShapeAndBalance) {
  sf::WaveformGenerator gen(sf::WaveformConfig{});
  EXPECT_EQ(gen.schema().attributeCount(), 40u);
  EXPECT_EQ(gen.schema().classCount(), 3u);
  std::vector<int> counts(3, 0);
  const int n = 300000;
  for (int i = 0; i < n; ++i) {
    auto x = *gen.next();
    ASSERT_EQ(x.attributeCount(), 40u);
    counts[x.classIndex()]++;
  }
  for (int c : counts) EXPECT_NEAR(static_cast<double>(c) / n, 1.0 / 3.0, 0.01);
}

TEST(Waveform, NoiseCarriesNoInformation) {
  // Plug-in mutual information between a binned attribute and the label.
  sf::WaveformGenerator gen(sf::WaveformConfig{.seed = 5});
  const int n = 100000;
  const double edges[] = {-1.2816, -0.8416, -0.5244, -0.2533, 0.0, 0.2533, 0.5244, 0.8416, 1.2816};
  auto bin = [&](double v) { return static_cast<int>(std::upper_bound(std::begin(edges), std::end(edges), v) - std::begin(edges)); };
  std::vector<sf::Instance> data;
  for (int i = 0; i < n; ++i) data.push_back(*gen.next());
  auto mi = [&](std::size_t attr) {
    double joint[10][3] = {};
    double px[10] = {}, py[3] = {};
    for (const auto& x : data) {
      int b = bin(x.value(attr));
      joint[b][x.classIndex()] += 1;
      px[b] += 1;
      py[x.classIndex()] += 1;
    }
    double m = 0;
    for (int b = 0; b < 10; ++b)
      for (int c = 0; c < 3; ++c)
        if (joint[b][c] > 0) m += joint[b][c] / n * std::log(joint[b][c] * n / (px[b] * py[c]));
    return m;
  };
  for (std::size_t a = 21; a < 40; ++a) EXPECT_LT(mi(a), 0.001) << "attribute " << a;
  EXPECT_GT(mi(6), 0.01);
}
