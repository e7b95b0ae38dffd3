#pragma once

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "steiner/errors.hpp"
#include "steiner/graph.hpp"
#include "steiner/types.hpp"

namespace steiner {

/// Order in which a partition drains its mailbox.
///  - kFifo: arrival order.
///  - kMinPriority: smallest priority_key first; equal keys in arrival order.
///    Priority is per-partition and best-effort: nothing orders messages
///    *across* partitions, so algorithms must stay correct under any order.
enum class QueueDiscipline { kFifo, kMinPriority };

/// How partitions execute.
///  - kThreaded: one worker thread per partition, fully asynchronous.
///  - kSingleLane: one thread services all partitions round-robin, one
///    message per visit; deterministic for deterministic handlers.
enum class ExecutionMode { kSingleLane, kThreaded };

struct EngineConfig {
  std::size_t partition_count = 1;
  QueueDiscipline discipline = QueueDiscipline::kMinPriority;
  ExecutionMode mode = ExecutionMode::kThreaded;
  /// Per-phase send budget = budget_factor * |E| (floored at 4096 so tiny
  /// graphs don't trip it); `message_budget` overrides with an absolute cap.
  std::uint64_t budget_factor = 64;
  std::optional<std::uint64_t> message_budget;
};

inline std::uint64_t resolve_message_budget(const EngineConfig& config,
                                            const Graph& graph) {
  if (config.message_budget) return *config.message_budget;
  return std::max<std::uint64_t>(config.budget_factor * graph.edge_count(),
                                 4096);
}

/// Counters for one engine phase. At quiescence messages_sent ==
/// messages_processed == dequeues; a skew indicates an aborted run.
struct PhaseStats {
  std::uint64_t messages_sent = 0;
  std::uint64_t messages_processed = 0;
  std::uint64_t dequeues = 0;
  double wall_time_ms = 0.0;
};

/// Ordered label -> PhaseStats map covering a whole pipeline run.
class EngineMetrics {
 public:
  PhaseStats& phase(const std::string& label) { return phases_[label]; }

  const PhaseStats* find(const std::string& label) const {
    const auto it = phases_.find(label);
    return it == phases_.end() ? nullptr : &it->second;
  }

  const std::map<std::string, PhaseStats>& phases() const { return phases_; }

  std::uint64_t total_messages_sent() const {
    std::uint64_t total = 0;
    for (const auto& [label, stats] : phases_) total += stats.messages_sent;
    return total;
  }

 private:
  std::map<std::string, PhaseStats> phases_;
};

/// One message addressed to a vertex. `priority_key` feeds the kMinPriority
/// discipline (conventionally the tentative distance being offered);
/// `sender` is the vertex the message conceptually travels from.
template <typename Payload>
struct Visitor {
  VertexId target = kNoVertex;
  VertexId sender = kNoVertex;
  Weight priority_key = 0;
  Payload payload{};
};

/// Builds one self-addressed priority-0 visitor per vertex satisfying
/// `pred`, with payload from `make(v)` — the standard way to bootstrap a
/// phase from a vertex subset.
template <typename Payload, typename Predicate, typename MakePayload>
std::vector<Visitor<Payload>> broadcast_init(const Graph& graph,
                                             Predicate&& pred,
                                             MakePayload&& make) {
  std::vector<Visitor<Payload>> out;
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    const auto id = static_cast<VertexId>(v);
    if (pred(id)) out.push_back({id, id, 0, make(id)});
  }
  return out;
}

/// Element-wise minimum of per-partition tables, the reduction half of a
/// distributed min-allreduce: every key present anywhere survives with its
/// least value under `value_less` (a strict total order, so the result does
/// not depend on table order).
template <typename Key, typename Value, typename Compare>
std::map<Key, Value> all_reduce_min(
    std::span<const std::map<Key, Value>> locals, Compare value_less) {
  std::map<Key, Value> global;
  for (const auto& table : locals) {
    for (const auto& [key, value] : table) {
      auto [it, inserted] = global.try_emplace(key, value);
      if (!inserted && value_less(value, it->second)) it->second = value;
    }
  }
  return global;
}

namespace detail {

/// Discipline-aware mailbox. kMinPriority breaks key ties by a per-queue
/// arrival sequence number, so the pop order is a total order.
template <typename Payload>
class VisitorQueue {
 public:
  explicit VisitorQueue(QueueDiscipline discipline)
      : discipline_(discipline) {}

  void push(Visitor<Payload> v) {
    if (discipline_ == QueueDiscipline::kFifo) {
      fifo_.push_back(std::move(v));
    } else {
      heap_.push(Entry{v.priority_key, next_seq_++, std::move(v)});
    }
  }

  bool empty() const {
    return discipline_ == QueueDiscipline::kFifo ? fifo_.empty()
                                                 : heap_.empty();
  }

  Visitor<Payload> pop() {
    if (discipline_ == QueueDiscipline::kFifo) {
      Visitor<Payload> v = std::move(fifo_.front());
      fifo_.pop_front();
      return v;
    }
    Visitor<Payload> v = heap_.top().visitor;
    heap_.pop();
    return v;
  }

 private:
  struct Entry {
    Weight key;
    std::uint64_t seq;
    Visitor<Payload> visitor;
  };
  struct EntryGreater {
    bool operator()(const Entry& a, const Entry& b) const {
      return std::tie(a.key, a.seq) > std::tie(b.key, b.seq);
    }
  };

  QueueDiscipline discipline_;
  std::deque<Visitor<Payload>> fifo_;
  std::priority_queue<Entry, std::vector<Entry>, EntryGreater> heap_;
  std::uint64_t next_seq_ = 0;
};

/// Mailbox plus counters for one partition. Counters are written under the
/// shard mutex (enqueued) or by the draining thread only (dequeues,
/// processed) and read after all workers have stopped.
template <typename Payload>
struct Shard {
  explicit Shard(QueueDiscipline discipline) : queue(discipline) {}
  std::mutex mutex;
  std::condition_variable cv;
  VisitorQueue<Payload> queue;
  std::uint64_t enqueued = 0;
  std::uint64_t dequeues = 0;
  std::uint64_t processed = 0;
};

/// Shared run state. Termination detection uses a single global counter of
/// outstanding (sent but not fully processed) messages: it is incremented
/// *before* a message becomes visible in any queue and decremented *after*
/// its handler returns, so outstanding == 0 implies no message is queued,
/// in flight, or being processed — and since only handlers send, none will
/// ever exist again. That is exactly quiescence.
template <typename Payload>
class RunState {
 public:
  RunState(const PartitionMap& partitions, std::size_t vertex_count,
           std::uint64_t budget, QueueDiscipline discipline, bool threaded)
      : partitions_(partitions),
        vertex_count_(vertex_count),
        budget_(budget),
        threaded_(threaded) {
    shards_.reserve(partitions.partition_count());
    for (std::size_t p = 0; p < partitions.partition_count(); ++p)
      shards_.emplace_back(new Shard<Payload>(discipline));
  }

  void send(Visitor<Payload> v) {
    if (v.target >= vertex_count_)
      throw EngineError("engine: visitor target " + std::to_string(v.target) +
                        " out of range (vertex count " +
                        std::to_string(vertex_count_) + ")");
    const std::uint64_t sent = 1 + sent_total_.fetch_add(1);
    if (sent > budget_)
      throw BudgetExceededError(
          "engine: message budget exceeded (" + std::to_string(sent) + " > " +
          std::to_string(budget_) +
          " sends this phase); suspected lost termination or runaway "
          "relaxation — raise the budget only if the workload is legitimate");
    outstanding_.fetch_add(1);
    Shard<Payload>& shard = *shards_[partitions_.owner(v.target)];
    {
      std::lock_guard<std::mutex> lock(shard.mutex);
      shard.queue.push(std::move(v));
      ++shard.enqueued;
    }
    if (threaded_) shard.cv.notify_one();
  }

  /// Records the first failure and wakes every worker so they observe stop().
  void fail(std::exception_ptr error) {
    {
      std::lock_guard<std::mutex> lock(error_mutex_);
      if (!error_) error_ = error;
    }
    stop_.store(true);
    notify_all_shards();
  }

  /// Wakes every worker. `stop_` and `outstanding_` change outside the shard
  /// mutexes, so a bare notify could land in the window where a worker has
  /// evaluated its wait predicate (lock held) but not yet blocked — and be
  /// lost. Taking each shard's mutex (empty critical section) before
  /// notifying closes that window; callers must therefore hold no shard lock.
  void notify_all_shards() {
    for (auto& shard : shards_) {
      { std::lock_guard<std::mutex> lock(shard->mutex); }
      shard->cv.notify_all();
    }
  }

  bool stop() const { return stop_.load(); }
  std::uint64_t outstanding() const { return outstanding_.load(); }
  void mark_processed() {
    if (outstanding_.fetch_sub(1) == 1 && threaded_) notify_all_shards();
  }

  Shard<Payload>& shard(std::size_t p) { return *shards_[p]; }
  std::size_t shard_count() const { return shards_.size(); }

  void rethrow_if_failed() {
    std::lock_guard<std::mutex> lock(error_mutex_);
    if (error_) std::rethrow_exception(error_);
  }

  void collect(PhaseStats& stats) const {
    for (const auto& shard : shards_) {
      stats.messages_sent += shard->enqueued;
      stats.messages_processed += shard->processed;
      stats.dequeues += shard->dequeues;
    }
  }

 private:
  const PartitionMap& partitions_;
  std::size_t vertex_count_;
  std::uint64_t budget_;
  bool threaded_;
  // unique_ptr: Shard holds a mutex/cv and must not move when the vector
  // is sized.
  std::vector<std::unique_ptr<Shard<Payload>>> shards_;
  std::atomic<std::uint64_t> outstanding_{0};
  std::atomic<std::uint64_t> sent_total_{0};
  std::atomic<bool> stop_{false};
  std::mutex error_mutex_;
  std::exception_ptr error_;
};

}  // namespace detail

/// Drives `handler` over `initial_visitors` and everything they transitively
/// send, until quiescence (no queued, in-flight, or in-processing message
/// remains). Message counts are accumulated into `stats`; wall time is left
/// to the caller, which usually wraps several steps into one phase.
///
/// `handler(visitor, send)` runs on the thread owning visitor.target's
/// partition; it may freely read/write state owned by that partition and
/// must use `send(Visitor)` for everything else. Exceptions thrown by a
/// handler (including budget exhaustion raised from `send`) abort the run
/// and are rethrown here.
template <typename Payload, typename Handler>
void run_to_quiescence(const Graph& graph, const PartitionMap& partitions,
                       const EngineConfig& config,
                       std::span<const Visitor<Payload>> initial_visitors,
                       Handler&& handler, PhaseStats& stats) {
  const bool threaded = config.mode == ExecutionMode::kThreaded &&
                        partitions.partition_count() > 1;
  detail::RunState<Payload> state(partitions, graph.vertex_count(),
                                  resolve_message_budget(config, graph),
                                  config.discipline, threaded);
  const auto send = [&state](Visitor<Payload> v) { state.send(std::move(v)); };

  // Initial visitors go through the regular send path: they are counted,
  // budgeted, and validated exactly like handler-emitted messages (so
  // messages_sent == messages_processed holds at quiescence).
  for (const Visitor<Payload>& v : initial_visitors) send(v);

  if (!threaded) {
    // Single lane (also threaded mode at P=1, which is the same machine):
    // round-robin over partitions, one message per visit.
    std::size_t p = 0;
    while (state.outstanding() > 0) {
      detail::Shard<Payload>& shard = state.shard(p);
      if (!shard.queue.empty()) {
        Visitor<Payload> v = shard.queue.pop();
        ++shard.dequeues;
        handler(std::as_const(v), send);
        ++shard.processed;
        state.mark_processed();
      }
      p = (p + 1) % state.shard_count();
    }
    state.collect(stats);
    return;
  }

  const auto worker = [&](std::size_t p) {
    detail::Shard<Payload>& shard = state.shard(p);
    for (;;) {
      Visitor<Payload> v;
      {
        std::unique_lock<std::mutex> lock(shard.mutex);
        shard.cv.wait(lock, [&] {
          return state.stop() || !shard.queue.empty() ||
                 state.outstanding() == 0;
        });
        if (state.stop()) return;
        if (shard.queue.empty()) {
          if (state.outstanding() == 0) return;
          continue;  // woken for a message another predicate already ate
        }
        v = shard.queue.pop();
        ++shard.dequeues;
      }
      try {
        handler(std::as_const(v), send);
      } catch (...) {
        state.fail(std::current_exception());
        return;
      }
      ++shard.processed;
      // No shard lock is held here: mark_processed may notify all shards
      // (including this one) when it detects quiescence.
      state.mark_processed();
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(partitions.partition_count());
  for (std::size_t p = 0; p < partitions.partition_count(); ++p)
    threads.emplace_back(worker, p);
  for (std::thread& t : threads) t.join();

  state.rethrow_if_failed();
  state.collect(stats);
}

/// Convenience overload accepting a vector of initial visitors.
template <typename Payload, typename Handler>
void run_to_quiescence(const Graph& graph, const PartitionMap& partitions,
                       const EngineConfig& config,
                       const std::vector<Visitor<Payload>>& initial_visitors,
                       Handler&& handler, PhaseStats& stats) {
  run_to_quiescence<Payload>(graph, partitions, config,
                             std::span<const Visitor<Payload>>(initial_visitors),
                             std::forward<Handler>(handler), stats);
}

}  // namespace steiner
