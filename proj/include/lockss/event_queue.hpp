#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <unordered_set>
#include <utility>
#include <vector>

#include "lockss/rng.hpp"
#include "lockss/types.hpp"

namespace lockss {

struct EventHandle {
  std::uint64_t seq = 0;
  friend bool operator==(EventHandle, EventHandle) = default;
};

// Virtual-time event queue. Dispatch order is (fire time, insertion sequence),
// so equal-time events run in the order they were scheduled.
template <class Payload>
class EventQueue {
 public:
  SimTime now() const { return now_; }
  std::size_t pending() const { return heap_.size() - cancelled_.size(); }
  bool empty() const { return pending() == 0; }
  std::uint64_t dispatched() const { return dispatched_; }

  // Running digest over (fire time, sequence) of every dispatched event.
  std::uint64_t trace_digest() const { return trace_digest_; }

  EventHandle schedule(SimTime at, Payload payload) {
    if (at < now_) {
      throw std::logic_error("event scheduled in the past: at=" + std::to_string(at) + " now=" + std::to_string(now_));
    }
    const std::uint64_t seq = next_seq_++;
    heap_.push(Entry{at, seq, std::move(payload)});
    return EventHandle{seq};
  }

  EventHandle schedule_in(SimTime delay, Payload payload) { return schedule(now_ + delay, std::move(payload)); }

  void cancel(EventHandle h) { cancelled_.insert(h.seq); }

  // Dispatches every event with fire time <= end, then sets the clock to end.
  template <class Dispatch>
  std::size_t run_until(SimTime end, Dispatch&& dispatch) {
    if (end < now_) throw std::logic_error("run_until into the past");
    std::size_t count = 0;
    while (!heap_.empty() && heap_.top().at <= end) {
      Entry e = std::move(const_cast<Entry&>(heap_.top()));
      heap_.pop();
      if (!cancelled_.empty()) {
        auto it = cancelled_.find(e.seq);
        if (it != cancelled_.end()) {
          cancelled_.erase(it);
          continue;
        }
      }
      now_ = e.at;
      trace_digest_ = mix(trace_digest_ ^ static_cast<std::uint64_t>(e.at), e.seq);
      ++dispatched_;
      ++count;
      dispatch(e.payload);
    }
    now_ = end;
    return count;
  }

  std::size_t run_until(SimTime end)
    requires std::is_invocable_v<Payload&>
  {
    return run_until(end, [](Payload& p) { p(); });
  }

 private:
  struct Entry {
    SimTime at;
    std::uint64_t seq;
    Payload payload;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      return a.at != b.at ? a.at > b.at : a.seq > b.seq;
    }
  };

  std::priority_queue<Entry, std::vector<Entry>, Later> heap_;
  std::unordered_set<std::uint64_t> cancelled_;
  SimTime now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t dispatched_ = 0;
  std::uint64_t trace_digest_ = 0;
};

using Engine = EventQueue<std::function<void()>>;

}  // namespace lockss
