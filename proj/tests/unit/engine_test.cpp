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

#include <atomic>
#include <map>
#include <set>

#include "streamforge/common/error.hpp"
#include "streamforge/engine/engine.hpp"

namespace sf = streamforge;

namespace {

class CounterSource : public sf::EntranceProcessor {
 public:
  CounterSource(std::uint64_t count, sf::StreamId* stream, std::vector<std::string> keys = {})
      : count_(count), stream_(stream), keys_(std::move(keys)) {}
  bool produce(sf::Emitter& out) override {
    if (next_ >= count_) return false;
    sf::Record r{next_, static_cast<double>(next_)};
    if (keys_.empty()) {
      out.emit(*stream_, sf::ContentEvent::of(r));
    } else {
      out.emit(*stream_, sf::ContentEvent::keyed(keys_[next_ % keys_.size()], r));
    }
    ++next_;
    return true;
  }
  std::unique_ptr<sf::Processor> clone() const override { return std::make_unique<CounterSource>(*this); }

 private:
  std::uint64_t count_;
  std::uint64_t next_ = 0;
  sf::StreamId* stream_;
  std::vector<std::string> keys_;
};

class Sink : public sf::Processor {
 public:
  void onCreate(std::size_t id, std::size_t) override { id_ = id; }
  void process(const sf::ContentEvent& e, sf::Emitter&) override {
    if (e.isTerminal()) {
      ++terminals;
      return;
    }
    if (const auto* r = e.as<sf::Record>()) seen.push_back(r->sequence);
    if (e.key()) keys.push_back(*e.key());
  }
  std::unique_ptr<sf::Processor> clone() const override { return std::make_unique<Sink>(); }

  std::size_t id_ = 0;
  std::vector<std::uint64_t> seen;
  std::vector<std::string> keys;
  int terminals = 0;
};

class Relay : public sf::Processor {
 public:
  explicit Relay(sf::StreamId* out) : out_(out) {}
  void process(const sf::ContentEvent& e, sf::Emitter& out) override {
    if (!e.isTerminal()) out.emit(*out_, e);
  }
  std::unique_ptr<sf::Processor> clone() const override { return std::make_unique<Relay>(out_); }

 private:
  sf::StreamId* out_;
};

}  // namespace

TEST(Payload, InlineAndHeapStorage) {
  struct Big {
    double values[32];
  };
  sf::Payload small(sf::Record{3, 1.5});
  EXPECT_TRUE(small.holds<sf::Record>());
  EXPECT_EQ(small.get<sf::Record>()->sequence, 3u);
  EXPECT_EQ(small.get<Big>(), nullptr);
  Big b{};
  b.values[31] = 7;
  sf::Payload big(b);
  sf::Payload copy = big;
  EXPECT_EQ(copy.get<Big>()->values[31], 7);
  sf::Payload moved = std::move(copy);
  EXPECT_TRUE(copy.empty());
  EXPECT_EQ(moved.get<Big>()->values[31], 7);
  sf::Payload str(std::string(100, 'x'));
  sf::Payload str2 = str;
  EXPECT_EQ(*str2.get<std::string>(), std::string(100, 'x'));
}

TEST(TopologyBuilder, HandlesAndErrors) {
  sf::TopologyBuilder b;
  sf::StreamId s = 0;
  auto src = std::make_shared<CounterSource>(1, &s);
  auto h = b.addProcessor(src, 1, "src");
  EXPECT_EQ(h.index, 0u);
  EXPECT_THROW(b.addProcessor(src, 1, "again"), sf::DuplicateProcessor);
  EXPECT_THROW(b.addProcessor(std::make_shared<Sink>(), 0, "zero"), sf::ConfigError);
  auto stream = b.createStream(h);
  EXPECT_THROW(b.createStream(sf::ProcessorHandle{9}), sf::UnknownProcessor);
  auto sink = b.addProcessor(std::make_shared<Sink>(), 4, "ls");
  EXPECT_EQ(b.parallelism(sink), 4u);
  b.connectInputShuffle(sink, stream);
  auto t = b.build();
  EXPECT_EQ(t.streams()[0].destinations.size(), 1u);
  EXPECT_TRUE(t.processors()[0].entrance);
}

TEST(TopologyBuilder, IsomorphicUnderPermutation) {
  sf::StreamId s = 0;
  auto build = [&](bool flip) {
    sf::TopologyBuilder b("t");
    sf::ProcessorHandle src, a, c;
    if (flip) {
      c = b.addProcessor(std::make_shared<Sink>(), 2, "c");
      a = b.addProcessor(std::make_shared<Sink>(), 1, "a");
      src = b.addProcessor(std::make_shared<CounterSource>(1, &s), 1, "src");
    } else {
      src = b.addProcessor(std::make_shared<CounterSource>(1, &s), 1, "src");
      a = b.addProcessor(std::make_shared<Sink>(), 1, "a");
      c = b.addProcessor(std::make_shared<Sink>(), 2, "c");
    }
    auto st = b.createStream(src, "out");
    b.connectInputKey(c, st);
    b.connectInputAll(a, st);
    return b.build().canonicalForm();
  };
  EXPECT_EQ(build(false), build(true));
}

TEST(Engine, DeterministicFifoPipeline) {
  sf::TopologyBuilder b;
  sf::StreamId s1 = 0, s2 = 0;
  auto src = b.addProcessor(std::make_shared<CounterSource>(1000, &s1), 1, "src");
  auto relay = b.addProcessor(std::make_shared<Relay>(&s2), 1, "relay");
  auto sink = b.addProcessor(std::make_shared<Sink>(), 1, "sink");
  s1 = b.createStream(src).id;
  s2 = b.createStream(relay).id;
  b.connectInputShuffle(relay, sf::StreamHandle{s1});
  b.connectInputShuffle(sink, sf::StreamHandle{s2});
  sf::Engine engine(b.build(), sf::EngineConfig::deterministic());
  auto report = engine.run();
  auto& out = engine.instanceAs<Sink>(sink, 0);
  ASSERT_EQ(out.seen.size(), 1000u);
  for (std::uint64_t i = 0; i < 1000; ++i) EXPECT_EQ(out.seen[i], i);
  EXPECT_EQ(out.terminals, 1);
  EXPECT_EQ(report.sourceInstances, 1000u);
  EXPECT_EQ(report.delivered[s2], 1000u);
}

TEST(Engine, KeyGroupingCoLocates) {
  for (auto mode : {sf::ExecutionMode::Deterministic, sf::ExecutionMode::Parallel}) {
    sf::TopologyBuilder b;
    sf::StreamId s = 0;
    auto src = b.addProcessor(std::make_shared<CounterSource>(500, &s, std::vector<std::string>{"a", "b"}), 1);
    auto sink = b.addProcessor(std::make_shared<Sink>(), 2);
    s = b.createStream(src).id;
    b.connectInputKey(sink, sf::StreamHandle{s});
    sf::EngineConfig cfg;
    cfg.mode = mode;
    cfg.workerCount = 2;
    sf::Engine engine(b.build(), cfg);
    engine.run();
    std::map<std::string, std::set<std::size_t>> homes;
    for (std::size_t i = 0; i < 2; ++i) {
      for (const auto& k : engine.instanceAs<Sink>(sink, i).keys) homes[k].insert(i);
    }
    ASSERT_EQ(homes.size(), 2u);
    EXPECT_EQ(homes["a"].size(), 1u);
    EXPECT_EQ(homes["b"].size(), 1u);
  }
}

TEST(Engine, KeylessEventOnKeyStreamIsRoutingError) {
  sf::TopologyBuilder b;
  sf::StreamId s = 0;
  auto src = b.addProcessor(std::make_shared<CounterSource>(5, &s), 1);
  auto sink = b.addProcessor(std::make_shared<Sink>(), 2);
  s = b.createStream(src).id;
  b.connectInputKey(sink, sf::StreamHandle{s});
  EXPECT_THROW(sf::runTopology(b.build(), sf::EngineConfig::deterministic()), sf::RoutingError);
}

TEST(Engine, TwoStreamsFromOneProcessor) {
  class Split : public sf::Processor {
   public:
    Split(sf::StreamId* even, sf::StreamId* odd) : even_(even), odd_(odd) {}
    void process(const sf::ContentEvent& e, sf::Emitter& out) override {
      if (e.isTerminal()) return;
      out.emit(e.as<sf::Record>()->sequence % 2 == 0 ? *even_ : *odd_, e);
    }
    std::unique_ptr<sf::Processor> clone() const override { return std::make_unique<Split>(even_, odd_); }
    sf::StreamId *even_, *odd_;
  };
  sf::TopologyBuilder b;
  sf::StreamId s = 0, even = 0, odd = 0;
  auto src = b.addProcessor(std::make_shared<CounterSource>(100, &s), 1);
  auto split = b.addProcessor(std::make_shared<Split>(&even, &odd), 1);
  auto a = b.addProcessor(std::make_shared<Sink>(), 1);
  auto c = b.addProcessor(std::make_shared<Sink>(), 1);
  s = b.createStream(src).id;
  even = b.createStream(split).id;
  odd = b.createStream(split).id;
  b.connectInputShuffle(split, sf::StreamHandle{s});
  b.connectInputShuffle(a, sf::StreamHandle{even});
  b.connectInputShuffle(c, sf::StreamHandle{odd});
  sf::Engine engine(b.build(), sf::EngineConfig::deterministic());
  engine.run();
  EXPECT_EQ(engine.instanceAs<Sink>(a, 0).seen.size(), 50u);
  EXPECT_EQ(engine.instanceAs<Sink>(c, 0).seen.size(), 50u);
}

TEST(Engine, AllGroupingBroadcastsAndConserves) {
  for (auto mode : {sf::ExecutionMode::Deterministic, sf::ExecutionMode::Parallel}) {
    sf::TopologyBuilder b;
    sf::StreamId s = 0;
    auto src = b.addProcessor(std::make_shared<CounterSource>(300, &s, std::vector<std::string>{"x", "y", "z"}), 1);
    auto all = b.addProcessor(std::make_shared<Sink>(), 4, "all");
    auto shuffle = b.addProcessor(std::make_shared<Sink>(), 3, "shuffle");
    auto key = b.addProcessor(std::make_shared<Sink>(), 2, "key");
    s = b.createStream(src).id;
    b.connectInputAll(all, sf::StreamHandle{s});
    b.connectInputShuffle(shuffle, sf::StreamHandle{s});
    b.connectInputKey(key, sf::StreamHandle{s});
    sf::EngineConfig cfg;
    cfg.mode = mode;
    cfg.workerCount = 3;
    sf::Engine engine(b.build(), cfg);
    auto report = engine.run();
    EXPECT_EQ(report.emitted[s], 300u);
    EXPECT_EQ(report.delivered[s], 300u * (4 + 1 + 1));
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(engine.instanceAs<Sink>(all, i).seen.size(), 300u);
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_EQ(engine.instanceAs<Sink>(shuffle, i).seen.size(), 100u);
      EXPECT_EQ(engine.instanceAs<Sink>(shuffle, i).terminals, 1);
    }
  }
}

TEST(Engine, SelfLoopTerminates) {
  class Countdown : public sf::Processor {
   public:
    explicit Countdown(sf::StreamId* loop) : loop_(loop) {}
    void process(const sf::ContentEvent& e, sf::Emitter& out) override {
      if (e.isTerminal()) return;
      auto r = *e.as<sf::Record>();
      ++handled;
      if (r.value > 0) out.emit(*loop_, sf::ContentEvent::of(sf::Record{r.sequence, r.value - 1}));
    }
    std::unique_ptr<sf::Processor> clone() const override { return std::make_unique<Countdown>(loop_); }
    sf::StreamId* loop_;
    int handled = 0;
  };
  for (auto mode : {sf::ExecutionMode::Deterministic, sf::ExecutionMode::Parallel}) {
    sf::TopologyBuilder b;
    sf::StreamId s = 0, loop = 0;
    auto src = b.addProcessor(std::make_shared<CounterSource>(10, &s), 1);
    auto cd = b.addProcessor(std::make_shared<Countdown>(&loop), 1);
    s = b.createStream(src).id;
    loop = b.createStream(cd).id;
    b.connectInputShuffle(cd, sf::StreamHandle{s});
    b.connectInputShuffle(cd, sf::StreamHandle{loop});
    sf::EngineConfig cfg;
    cfg.mode = mode;
    cfg.workerCount = 2;
    sf::Engine engine(b.build(), cfg);
    engine.run();
    // Record i starts at value i and loops i more times.
    EXPECT_EQ(engine.instanceAs<Countdown>(cd, 0).handled, 10 + 45);
  }
}

TEST(Engine, ParallelPreservesChannelOrder) {
  sf::TopologyBuilder b;
  sf::StreamId s = 0, r = 0;
  auto src = b.addProcessor(std::make_shared<CounterSource>(20000, &s), 2);
  auto relay = b.addProcessor(std::make_shared<Relay>(&r), 3);
  auto sink = b.addProcessor(std::make_shared<Sink>(), 2);
  s = b.createStream(src).id;
  r = b.createStream(relay).id;
  b.connectInputShuffle(relay, sf::StreamHandle{s});
  b.connectInputShuffle(sink, sf::StreamHandle{r});
  auto cfg = sf::EngineConfig::parallel(4);
  cfg.trace = true;
  cfg.queueCapacity = 16;
  auto report = sf::runTopology(b.build(), cfg);
  EXPECT_EQ(report.trace.size(), 80000u);
  EXPECT_TRUE(sf::sequenceCheck(report.trace).empty());
}

TEST(SequenceCheck, DetectsSwaps) {
  std::vector<sf::TraceRecord> t;
  for (std::uint64_t i = 0; i < 5; ++i) t.push_back({0, 0, 0, 1, 0, i});
  EXPECT_TRUE(sf::sequenceCheck(t).empty());
  std::swap(t[1], t[2]);
  EXPECT_EQ(sf::sequenceCheck(t).size(), 1u);
  // Other channels are independent.
  t.push_back({0, 1, 0, 1, 0, 0});
  EXPECT_EQ(sf::sequenceCheck(t).size(), 1u);
}

TEST(Engine, DeadlockIsDiagnosed) {
  // Two processors on different workers flood each other through capacity-1
  // channels while never consuming: a ping-pong storm that must be reported.
  class Flood : public sf::Processor {
   public:
    explicit Flood(sf::StreamId* out) : out_(out) {}
    void process(const sf::ContentEvent& e, sf::Emitter& out) override {
      if (e.isTerminal()) return;
      for (int k = 0; k < 8; ++k) out.emit(*out_, sf::ContentEvent::of(sf::Record{}));
    }
    std::unique_ptr<sf::Processor> clone() const override { return std::make_unique<Flood>(out_); }
    sf::StreamId* out_;
  };
  sf::TopologyBuilder b;
  sf::StreamId s = 0, ab = 0, ba = 0;
  auto src = b.addProcessor(std::make_shared<CounterSource>(1, &s), 1, "src");
  auto a = b.addProcessor(std::make_shared<Flood>(&ab), 1, "a");
  auto c = b.addProcessor(std::make_shared<Flood>(&ba), 1, "b");
  s = b.createStream(src).id;
  ab = b.createStream(a).id;
  ba = b.createStream(c).id;
  b.connectInputShuffle(a, sf::StreamHandle{s});
  b.connectInputShuffle(c, sf::StreamHandle{ab});
  b.connectInputShuffle(a, sf::StreamHandle{ba});
  auto cfg = sf::EngineConfig::parallel(3);
  cfg.queueCapacity = 1;
  cfg.deadlockTimeout = std::chrono::milliseconds(300);
  try {
    sf::runTopology(b.build(), cfg);
    FAIL() << "expected DeadlockError";
  } catch (const sf::DeadlockError& e) {
    EXPECT_NE(std::string(e.what()).find("full queues"), std::string::npos);
  }
}

TEST(Engine, ConfigValidation) {
  sf::TopologyBuilder b;
  sf::StreamId s = 0;
  b.addProcessor(std::make_shared<CounterSource>(1, &s), 1);
  auto cfg = sf::EngineConfig::parallel(0);
  EXPECT_THROW(sf::Engine(b.build(), cfg), sf::ConfigError);
  sf::TopologyBuilder b2;
  b2.addProcessor(std::make_shared<CounterSource>(1, &s), 1);
  sf::EngineConfig c2;
  c2.queueCapacity = 0;
  EXPECT_THROW(sf::Engine(b2.build(), c2), sf::ConfigError);
}
