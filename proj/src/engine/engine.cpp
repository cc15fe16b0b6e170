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

#include "streamforge/engine/engine.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <queue>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "streamforge/common/error.hpp"
#include "streamforge/common/hash.hpp"

namespace streamforge {

namespace {

using Clock = std::chrono::steady_clock;

constexpr StreamId kTerminalStream = std::numeric_limits<StreamId>::max();
constexpr std::size_t kBatch = 64;

struct Delivery {
  std::uint32_t destProc = 0;
  std::uint32_t destInst = 0;
  StreamId stream = kTerminalStream;
  std::uint32_t srcInst = 0;
  std::uint64_t sequence = 0;
  bool fromSource = false;
  ContentEvent event;
};

// FIFO of deliveries over a power-of-two ring. Slots are reused, so steady
// state allocates nothing; references are invalidated by growth.
class DeliveryQueue {
 public:
  bool empty() const noexcept { return count_ == 0; }
  std::size_t size() const noexcept { return count_; }
  Delivery& operator[](std::size_t k) noexcept { return slots_[(head_ + k) & mask_]; }
  Delivery& front() noexcept { return slots_[head_]; }

  /// Returns a slot with default header fields; the caller assigns the event.
  Delivery& emplace_back() {
    if (count_ == slots_.size()) grow();
    Delivery& d = slots_[(head_ + count_++) & mask_];
    d.stream = kTerminalStream;
    d.srcInst = 0;
    d.sequence = 0;
    d.fromSource = false;
    return d;
  }

  Delivery pop_front() noexcept {
    Delivery d = std::move(slots_[head_]);
    head_ = (head_ + 1) & mask_;
    --count_;
    return d;
  }

  void clear() noexcept {
    for (std::size_t k = 0; k < count_; ++k) (*this)[k].event = ContentEvent();
    head_ = 0;
    count_ = 0;
  }

 private:
  void grow() {
    std::vector<Delivery> next(slots_.empty() ? 64 : slots_.size() * 2);
    for (std::size_t k = 0; k < count_; ++k) next[k] = std::move((*this)[k]);
    slots_ = std::move(next);
    head_ = 0;
    mask_ = slots_.size() - 1;
  }

  std::vector<Delivery> slots_;
  std::size_t head_ = 0;
  std::size_t count_ = 0;
  std::size_t mask_ = 0;
};

struct RouteTarget {
  std::uint32_t proc;
  std::uint32_t parallelism;
  Grouping grouping;
};

struct Route {
  std::uint32_t source;
  std::vector<RouteTarget> targets;
};

// Thrown inside workers to unwind a blocked push once the run is aborting.
struct Aborted {};

}  // namespace

EngineConfig EngineConfig::deterministic(std::uint64_t seed) {
  EngineConfig c;
  c.seed = seed;
  return c;
}

EngineConfig EngineConfig::parallel(std::size_t workers, std::uint64_t seed) {
  EngineConfig c;
  c.mode = ExecutionMode::Parallel;
  c.workerCount = workers;
  c.seed = seed;
  return c;
}

std::vector<SequenceViolation> sequenceCheck(const std::vector<TraceRecord>& trace) {
  struct ChannelKey {
    std::uint32_t ep, ei;
    StreamId s;
    std::uint32_t dp, di;
    auto operator<=>(const ChannelKey&) const = default;
  };
  std::map<ChannelKey, TraceRecord> highest;
  std::vector<SequenceViolation> out;
  for (const auto& r : trace) {
    ChannelKey k{r.emitterProcessor, r.emitterInstance, r.stream, r.destinationProcessor,
                 r.destinationInstance};
    auto [it, inserted] = highest.try_emplace(k, r);
    if (inserted) continue;
    if (r.sequence < it->second.sequence) {
      out.push_back({it->second, r});
    } else {
      it->second = r;
    }
  }
  return out;
}

std::uint64_t RunReport::totalDelivered() const {
  std::uint64_t total = 0;
  for (auto d : delivered) total += d;
  return total;
}

std::string RunReport::csvHeader() {
  return "mode,workers,source_instances,events_delivered,seconds,throughput";
}

std::string RunReport::toCsvLine() const {
  std::ostringstream out;
  out << (mode == ExecutionMode::Deterministic ? "det" : "par") << ',' << workers << ','
      << sourceInstances << ',' << totalDelivered() << ',' << wallClockSeconds << ','
      << throughput;
  return out.str();
}

struct Engine::Impl {
  Topology topology;
  EngineConfig config;
  std::vector<Route> routes;
  std::vector<std::vector<std::unique_ptr<Processor>>> instances;
  bool ran = false;

  // Per-instance emission bookkeeping; touched only by the owning worker.
  struct Context final : Emitter {
    Impl* impl = nullptr;
    std::uint32_t proc = 0;
    std::uint32_t inst = 0;
    std::vector<std::vector<std::uint64_t>> shuffle;  // [stream][target]
    std::unordered_map<std::uint64_t, std::uint64_t> sequences;
    DeliveryQueue* sink = nullptr;
    bool entrance = false;
    std::vector<std::uint64_t>* emitted = nullptr;

    void emit(StreamId stream, ContentEvent event) override { impl->route(*this, stream, event); }
  };
  std::vector<std::vector<Context>> contexts;

  Impl(Topology t, EngineConfig c) : topology(std::move(t)), config(c) {
    if (config.queueCapacity < 1) throw ConfigError("queueCapacity must be at least 1");
    if (config.mode == ExecutionMode::Parallel) {
      if (const char* env = std::getenv("STREAMFORGE_WORKERS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1) {
          throw ConfigError("STREAMFORGE_WORKERS must be a positive integer");
        }
        config.workerCount = static_cast<std::size_t>(v);
      }
      if (config.workerCount < 1) throw ConfigError("workerCount must be at least 1");
    }
    const auto& procs = topology.processors();
    for (const auto& s : topology.streams()) {
      Route r{static_cast<std::uint32_t>(s.source.index), {}};
      for (const auto& d : s.destinations) {
        r.targets.push_back({static_cast<std::uint32_t>(d.processor.index),
                             static_cast<std::uint32_t>(procs[d.processor.index].parallelism),
                             d.grouping});
      }
      routes.push_back(std::move(r));
    }
    instances.resize(procs.size());
    contexts.resize(procs.size());
    for (std::size_t p = 0; p < procs.size(); ++p) {
      contexts[p].resize(procs[p].parallelism);
      for (std::size_t i = 0; i < procs[p].parallelism; ++i) {
        auto inst = procs[p].prototype->clone();
        if (!inst) throw ConfigError("processor '" + procs[p].name + "' returned a null clone");
        inst->onCreate(i, procs[p].parallelism);
        instances[p].push_back(std::move(inst));
        auto& ctx = contexts[p][i];
        ctx.impl = this;
        ctx.proc = static_cast<std::uint32_t>(p);
        ctx.inst = static_cast<std::uint32_t>(i);
        ctx.shuffle.resize(routes.size());
        ctx.entrance = procs[p].entrance;
      }
    }
  }

  static std::uint64_t channelKey(StreamId s, std::uint32_t proc, std::uint32_t inst) {
    return (static_cast<std::uint64_t>(s) << 40) ^ (static_cast<std::uint64_t>(proc) << 20) ^ inst;
  }

  void push(Context& ctx, StreamId stream, std::uint32_t proc, std::uint32_t inst, ContentEvent&& event) {
    Delivery& d = ctx.sink->emplace_back();
    d.destProc = proc;
    d.destInst = inst;
    d.stream = stream;
    d.srcInst = ctx.inst;
    d.fromSource = ctx.entrance;
    if (config.trace) d.sequence = ctx.sequences[channelKey(stream, proc, inst)]++;
    d.event = std::move(event);
  }

  void route(Context& ctx, StreamId stream, ContentEvent& event) {
    if (stream >= routes.size()) throw UnknownStream("emit on unknown stream " + std::to_string(stream));
    const Route& r = routes[stream];
    if (r.source != ctx.proc) {
      throw RoutingError("processor '" + topology.processors()[ctx.proc].name +
                         "' emitted on stream '" + topology.streams()[stream].name +
                         "' which it does not own");
    }
    ++(*ctx.emitted)[stream];
    auto& counters = ctx.shuffle[stream];
    if (counters.size() < r.targets.size()) counters.resize(r.targets.size(), 0);
    const std::size_t last = r.targets.size();
    // The final delivery takes the event by move; earlier ones copy it.
    auto take = [&](bool final) { return final ? std::move(event) : ContentEvent(event); };
    for (std::size_t t = 0; t < last; ++t) {
      const RouteTarget& target = r.targets[t];
      const bool lastTarget = t + 1 == last;
      if (event.isTerminal() || target.grouping == Grouping::All) {
        for (std::uint32_t i = 0; i < target.parallelism; ++i) {
          push(ctx, stream, target.proc, i, take(lastTarget && i + 1 == target.parallelism));
        }
      } else if (target.grouping == Grouping::Shuffle) {
        auto i = static_cast<std::uint32_t>(counters[t]++ % target.parallelism);
        push(ctx, stream, target.proc, i, take(lastTarget));
      } else {
        if (!event.key()) {
          throw RoutingError("keyless event on key-grouped stream '" +
                             topology.streams()[stream].name + "'");
        }
        auto i = static_cast<std::uint32_t>(
            target.parallelism == 1 ? 0 : stableHash64(*event.key()) % target.parallelism);
        push(ctx, stream, target.proc, i, take(lastTarget));
      }
    }
  }

  // Processors in breadth-first order from the sources; back edges ignored.
  std::vector<std::size_t> terminationOrder() const {
    const auto& procs = topology.processors();
    std::vector<std::vector<std::size_t>> next(procs.size());
    for (const auto& r : routes) {
      for (const auto& t : r.targets) next[r.source].push_back(t.proc);
    }
    std::vector<bool> seen(procs.size(), false);
    std::vector<std::size_t> order;
    std::queue<std::size_t> frontier;
    for (std::size_t p = 0; p < procs.size(); ++p) {
      if (procs[p].entrance) {
        seen[p] = true;
        frontier.push(p);
      }
    }
    auto drain = [&] {
      while (!frontier.empty()) {
        auto p = frontier.front();
        frontier.pop();
        order.push_back(p);
        for (auto q : next[p]) {
          if (!seen[q]) {
            seen[q] = true;
            frontier.push(q);
          }
        }
      }
    };
    drain();
    for (std::size_t p = 0; p < procs.size(); ++p) {
      if (!seen[p]) {
        seen[p] = true;
        frontier.push(p);
        drain();
      }
    }
    return order;
  }

  RunReport newReport() const {
    RunReport report;
    report.mode = config.mode;
    report.workers = config.mode == ExecutionMode::Parallel ? config.workerCount : 1;
    for (const auto& s : topology.streams()) report.streamNames.push_back(s.name);
    report.emitted.assign(routes.size(), 0);
    report.delivered.assign(routes.size(), 0);
    return report;
  }

  static void finish(RunReport& report, Clock::time_point start) {
    report.wallClockSeconds = std::chrono::duration<double>(Clock::now() - start).count();
    report.throughput = report.wallClockSeconds > 0
                            ? static_cast<double>(report.sourceInstances) / report.wallClockSeconds
                            : 0.0;
  }

  struct Parallel;
  RunReport runDeterministic();
  RunReport runParallel();
};

RunReport Engine::Impl::runDeterministic() {
  RunReport report = newReport();
  auto start = Clock::now();
  DeliveryQueue queue;
  for (auto& per : contexts) {
    for (auto& ctx : per) {
      ctx.sink = &queue;
      ctx.emitted = &report.emitted;
    }
  }
  std::size_t sourcePending = 0;
  auto deliverFront = [&] {
    Delivery d = queue.pop_front();
    if (d.fromSource) --sourcePending;
    if (d.stream != kTerminalStream) {
      ++report.delivered[d.stream];
      if (config.trace) {
        report.trace.push_back({routes[d.stream].source, d.srcInst, d.stream, d.destProc,
                                d.destInst, d.sequence});
      }
    }
    instances[d.destProc][d.destInst]->process(d.event, contexts[d.destProc][d.destInst]);
  };

  std::vector<std::pair<std::size_t, std::size_t>> sources;
  for (std::size_t p = 0; p < instances.size(); ++p) {
    if (!topology.processors()[p].entrance) continue;
    for (std::size_t i = 0; i < instances[p].size(); ++i) sources.emplace_back(p, i);
  }
  std::size_t cursor = 0;
  const std::size_t window = config.sourceWindow;
  while (true) {
    bool poll = !sources.empty() && (queue.empty() || sourcePending < window);
    if (poll) {
      cursor %= sources.size();
      auto [p, i] = sources[cursor];
      auto& src = static_cast<EntranceProcessor&>(*instances[p][i]);
      const std::size_t before = queue.size();
      if (src.produce(contexts[p][i])) {
        ++report.sourceInstances;
        ++cursor;
      } else {
        sources.erase(sources.begin() + static_cast<std::ptrdiff_t>(cursor));
      }
      sourcePending += queue.size() - before;
      continue;
    }
    if (queue.empty()) break;
    deliverFront();
  }

  for (std::size_t p : terminationOrder()) {
    for (std::size_t i = 0; i < instances[p].size(); ++i) {
      Delivery& d = queue.emplace_back();
      d.destProc = static_cast<std::uint32_t>(p);
      d.destInst = static_cast<std::uint32_t>(i);
      d.event = ContentEvent::terminal();
    }
    while (!queue.empty()) deliverFront();
  }
  finish(report, start);
  return report;
}

namespace {

// Bounded multi-channel inbox of one destination instance. Slot 0 carries
// terminal events and is unbounded.
struct Inbox {
  std::mutex mutex;
  std::condition_variable notFull;
  std::vector<DeliveryQueue> channels;
  std::size_t cursor = 0;
  std::size_t waiters = 0;
  std::atomic<std::size_t> pending{0};
  std::size_t owner = 0;
  std::size_t ownedIndex = 0;
};

struct WorkerSignal {
  std::mutex mutex;
  std::condition_variable cv;
  bool hasWork = false;
};

}  // namespace

// Shared state of one parallel run. A worker blocked on a full channel keeps
// serving its other instances, so multi-instance workers cannot form wait
// cycles on acyclic topologies.
struct Engine::Impl::Parallel {
  struct Worker {
    std::vector<std::pair<std::size_t, std::size_t>> owned;
    std::vector<char> busy;
    std::vector<std::pair<std::size_t, std::size_t>> sources;
    std::vector<std::uint64_t> emitted;
    std::vector<std::uint64_t> delivered;
    std::vector<TraceRecord> trace;
    WorkerSignal signal;
  };

  Impl& impl;
  const std::size_t capacity;
  std::vector<std::unordered_map<std::uint64_t, std::size_t>> slotOf;
  std::vector<std::vector<std::unique_ptr<Inbox>>> inboxes;
  std::vector<std::unique_ptr<Worker>> workers;
  std::atomic<std::int64_t> inFlight{0};
  std::atomic<std::size_t> activeSources{0};
  std::atomic<std::uint64_t> progress{0};
  std::atomic<std::uint64_t> sourceInstances{0};
  std::atomic<bool> stop{false};
  std::mutex errorMutex;
  std::exception_ptr error;

  explicit Parallel(Impl& owner) : impl(owner), capacity(owner.config.queueCapacity) {
    const auto& procs = impl.topology.processors();
    const std::size_t w = impl.config.workerCount;
    slotOf.resize(procs.size());
    for (StreamId s = 0; s < impl.routes.size(); ++s) {
      for (const auto& t : impl.routes[s].targets) {
        for (std::uint32_t e = 0; e < procs[impl.routes[s].source].parallelism; ++e) {
          slotOf[t.proc].try_emplace(slotKey(s, e), slotOf[t.proc].size() + 1);
        }
      }
    }
    for (std::size_t k = 0; k < w; ++k) {
      auto worker = std::make_unique<Worker>();
      worker->emitted.assign(impl.routes.size(), 0);
      worker->delivered.assign(impl.routes.size(), 0);
      workers.push_back(std::move(worker));
    }
    inboxes.resize(procs.size());
    std::size_t flat = 0;
    for (std::size_t p = 0; p < procs.size(); ++p) {
      for (std::size_t i = 0; i < procs[p].parallelism; ++i, ++flat) {
        auto box = std::make_unique<Inbox>();
        box->channels.resize(slotOf[p].size() + 1);
        box->owner = flat % w;
        Worker& worker = *workers[box->owner];
        box->ownedIndex = worker.owned.size();
        worker.owned.emplace_back(p, i);
        worker.busy.push_back(0);
        if (procs[p].entrance) worker.sources.emplace_back(p, i);
        inboxes[p].push_back(std::move(box));
      }
    }
    for (const auto& worker : workers) activeSources += worker->sources.size();
  }

  static std::uint64_t slotKey(StreamId s, std::uint32_t emitter) {
    return (static_cast<std::uint64_t>(s) << 32) | emitter;
  }

  void wake(std::size_t w) {
    auto& sig = workers[w]->signal;
    {
      std::lock_guard<std::mutex> lock(sig.mutex);
      sig.hasWork = true;
    }
    sig.cv.notify_one();
  }

  void fail(std::exception_ptr e) {
    {
      std::lock_guard<std::mutex> lock(errorMutex);
      if (!error) error = e;
    }
    stop = true;
    for (std::size_t w = 0; w < workers.size(); ++w) wake(w);
    for (auto& per : inboxes) {
      for (auto& box : per) box->notFull.notify_all();
    }
  }

  std::string describeFull() {
    const auto& procs = impl.topology.processors();
    std::ostringstream out;
    out << "no progress for " << impl.config.deadlockTimeout.count() << " ms; full queues:";
    for (std::size_t p = 0; p < procs.size(); ++p) {
      for (const auto& [key, slot] : slotOf[p]) {
        for (std::size_t i = 0; i < inboxes[p].size(); ++i) {
          auto& box = *inboxes[p][i];
          std::lock_guard<std::mutex> lock(box.mutex);
          if (box.channels[slot].size() >= capacity) {
            auto s = static_cast<StreamId>(key >> 32);
            out << " [" << impl.topology.streams()[s].name << " from "
                << procs[impl.routes[s].source].name << '#' << (key & 0xffffffffu) << " to "
                << procs[p].name << '#' << i << ": " << box.channels[slot].size() << ']';
          }
        }
      }
    }
    return out.str();
  }

  void enqueue(Inbox& box, std::size_t slot, Delivery&& d) {
    inFlight.fetch_add(1, std::memory_order_relaxed);
    box.channels[slot].emplace_back() = std::move(d);
    box.pending.fetch_add(1, std::memory_order_release);
  }

  // Pushes deliveries in emission order. A full channel owned by another
  // worker makes this worker serve its idle instances until space appears.
  void flush(std::size_t self, DeliveryQueue& outbox) {
    std::size_t k = 0;
    while (k < outbox.size()) {
      const std::uint32_t dp = outbox[k].destProc;
      const std::uint32_t di = outbox[k].destInst;
      Inbox& box = *inboxes[dp][di];
      const bool local = box.owner == self;
      auto seen = progress.load();
      auto since = Clock::now();
      while (k < outbox.size() && outbox[k].destProc == dp && outbox[k].destInst == di) {
        std::unique_lock<std::mutex> lock(box.mutex);
        for (; k < outbox.size() && outbox[k].destProc == dp && outbox[k].destInst == di; ++k) {
          Delivery& d = outbox[k];
          std::size_t slot =
              d.stream == kTerminalStream ? 0 : slotOf[dp].at(slotKey(d.stream, d.srcInst));
          if (!local && slot != 0 && box.channels[slot].size() >= capacity) break;
          enqueue(box, slot, std::move(d));
        }
        if (k == outbox.size() || outbox[k].destProc != dp || outbox[k].destInst != di) break;
        lock.unlock();
        wake(box.owner);
        if (stop) throw Aborted{};
        if (!serviceOwned(self)) {
          lock.lock();
          ++box.waiters;
          box.notFull.wait_for(lock, std::chrono::milliseconds(2));
          --box.waiters;
          lock.unlock();
        }
        auto now = progress.load();
        if (now != seen) {
          seen = now;
          since = Clock::now();
        } else if (Clock::now() - since > impl.config.deadlockTimeout) {
          throw DeadlockError(describeFull());
        }
      }
      if (!local) wake(box.owner);
    }
    outbox.clear();
  }

  // Processes up to one batch for one owned instance that is not already on
  // this worker's call stack.
  bool serviceInstance(std::size_t self, std::size_t ownedIndex) {
    Worker& me = *workers[self];
    if (me.busy[ownedIndex]) return false;
    auto [p, i] = me.owned[ownedIndex];
    Inbox& box = *inboxes[p][i];
    if (box.pending.load(std::memory_order_acquire) == 0) return false;
    std::vector<Delivery> batch;
    {
      std::lock_guard<std::mutex> lock(box.mutex);
      const std::size_t n = box.channels.size();
      std::size_t empties = 0;
      while (batch.size() < kBatch && empties < n) {
        auto& channel = box.channels[box.cursor];
        box.cursor = (box.cursor + 1) % n;
        if (channel.empty()) {
          ++empties;
          continue;
        }
        empties = 0;
        batch.push_back(channel.pop_front());
      }
      box.pending.fetch_sub(batch.size(), std::memory_order_relaxed);
      if (box.waiters > 0) box.notFull.notify_all();
    }
    if (batch.empty()) return false;
    me.busy[ownedIndex] = 1;
    auto& ctx = impl.contexts[p][i];
    DeliveryQueue outbox;
    ctx.sink = &outbox;
    for (auto& d : batch) {
      if (d.stream != kTerminalStream) {
        ++me.delivered[d.stream];
        if (impl.config.trace) {
          me.trace.push_back({impl.routes[d.stream].source, d.srcInst, d.stream, d.destProc,
                              d.destInst, d.sequence});
        }
      }
      impl.instances[p][i]->process(d.event, ctx);
      flush(self, outbox);
      progress.fetch_add(1, std::memory_order_relaxed);
      inFlight.fetch_sub(1, std::memory_order_acq_rel);
    }
    me.busy[ownedIndex] = 0;
    return true;
  }

  bool serviceOwned(std::size_t self) {
    bool worked = false;
    for (std::size_t k = 0; k < workers[self]->owned.size(); ++k) {
      worked = serviceInstance(self, k) || worked;
    }
    return worked;
  }

  std::size_t backlog(std::size_t self) const {
    std::size_t total = 0;
    for (auto [p, i] : workers[self]->owned) total += inboxes[p][i]->pending.load(std::memory_order_relaxed);
    return total;
  }

  bool produceSources(std::size_t self) {
    Worker& me = *workers[self];
    if (me.sources.empty() || backlog(self) >= capacity) return false;
    for (std::size_t s = 0; s < me.sources.size();) {
      auto [p, i] = me.sources[s];
      auto& box = *inboxes[p][i];
      me.busy[box.ownedIndex] = 1;
      auto& src = static_cast<EntranceProcessor&>(*impl.instances[p][i]);
      auto& ctx = impl.contexts[p][i];
      DeliveryQueue outbox;
      ctx.sink = &outbox;
      bool alive = true;
      for (std::size_t k = 0; k < kBatch && alive; ++k) {
        alive = src.produce(ctx);
        if (alive) sourceInstances.fetch_add(1, std::memory_order_relaxed);
      }
      flush(self, outbox);
      me.busy[box.ownedIndex] = 0;
      if (!alive) {
        me.sources.erase(me.sources.begin() + static_cast<std::ptrdiff_t>(s));
        activeSources.fetch_sub(1, std::memory_order_acq_rel);
      } else {
        ++s;
      }
    }
    return true;
  }

  void workerLoop(std::size_t self) {
    Worker& me = *workers[self];
    for (auto [p, i] : me.owned) impl.contexts[p][i].emitted = &me.emitted;
    try {
      while (!stop) {
        bool worked = serviceOwned(self);
        worked = produceSources(self) || worked;
        if (!worked) {
          std::unique_lock<std::mutex> lock(me.signal.mutex);
          me.signal.cv.wait_for(lock, std::chrono::milliseconds(1),
                                [&] { return me.signal.hasWork || stop.load(); });
          me.signal.hasWork = false;
        }
      }
    } catch (const Aborted&) {
    } catch (...) {
      fail(std::current_exception());
    }
  }

  bool awaitQuiescence() {
    while (!stop) {
      if (activeSources.load() == 0 && inFlight.load() == 0) return true;
      std::this_thread::sleep_for(std::chrono::microseconds(200));
    }
    return false;
  }

  RunReport run() {
    RunReport report = impl.newReport();
    auto start = Clock::now();
    std::vector<std::thread> threads;
    threads.reserve(workers.size());
    for (std::size_t w = 0; w < workers.size(); ++w) threads.emplace_back([this, w] { workerLoop(w); });

    if (awaitQuiescence()) {
      for (std::size_t p : impl.terminationOrder()) {
        for (std::size_t i = 0; i < inboxes[p].size(); ++i) {
          Inbox& box = *inboxes[p][i];
          {
            std::lock_guard<std::mutex> lock(box.mutex);
            Delivery d;
            d.destProc = static_cast<std::uint32_t>(p);
            d.destInst = static_cast<std::uint32_t>(i);
            d.event = ContentEvent::terminal();
            enqueue(box, 0, std::move(d));
          }
          wake(box.owner);
        }
        if (!awaitQuiescence()) break;
      }
    }
    stop = true;
    for (std::size_t w = 0; w < workers.size(); ++w) wake(w);
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);

    for (const auto& worker : workers) {
      for (std::size_t s = 0; s < impl.routes.size(); ++s) {
        report.emitted[s] += worker->emitted[s];
        report.delivered[s] += worker->delivered[s];
      }
      report.trace.insert(report.trace.end(), worker->trace.begin(), worker->trace.end());
    }
    report.sourceInstances = sourceInstances.load();
    finish(report, start);
    return report;
  }
};

RunReport Engine::Impl::runParallel() {
  Parallel run(*this);
  return run.run();
}

Engine::Engine(Topology topology, EngineConfig config)
    : impl_(std::make_unique<Impl>(std::move(topology), config)) {}

Engine::~Engine() = default;

RunReport Engine::run() {
  if (impl_->ran) throw Error("Engine::run may be called only once");
  impl_->ran = true;
  return impl_->config.mode == ExecutionMode::Deterministic ? impl_->runDeterministic()
                                                             : impl_->runParallel();
}

const Topology& Engine::topology() const { return impl_->topology; }
const EngineConfig& Engine::config() const { return impl_->config; }

std::size_t Engine::instanceCount(ProcessorHandle h) const {
  if (h.index >= impl_->instances.size()) throw UnknownProcessor("unknown processor handle");
  return impl_->instances[h.index].size();
}

Processor& Engine::instance(ProcessorHandle h, std::size_t i) {
  if (h.index >= impl_->instances.size()) throw UnknownProcessor("unknown processor handle");
  return *impl_->instances[h.index].at(i);
}

RunReport runTopology(Topology topology, EngineConfig config) {
  Engine engine(std::move(topology), config);
  return engine.run();
}

}  // namespace streamforge
