#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "flowsim/sim_time.hpp"

namespace flowsim {

// Time-ordered event queue with a strict total order: ties on the
// timestamp break by insertion sequence number, so identical runs replay
// identically.
template <typename EventT>
class EventQueue {
 public:
  struct Entry {
    SimTime at;
    std::uint64_t seq;
    EventT event;
  };

  void schedule(SimTime at, EventT event) {
    if (at < current_time_) {
      throw std::invalid_argument("cannot schedule an event in the past");
    }
    heap_.push_back(Entry{at, next_seq_++, std::move(event)});
    std::push_heap(heap_.begin(), heap_.end(), later);
  }

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  const Entry& top() const { return heap_.front(); }

  Entry pop() {
    std::pop_heap(heap_.begin(), heap_.end(), later);
    Entry e = std::move(heap_.back());
    heap_.pop_back();
    current_time_ = e.at;
    return e;
  }

  SimTime current_time() const { return current_time_; }

  // Used by the simulation loop when it finishes a window with no event
  // exactly at the boundary. Time never moves backwards.
  void advance_to(SimTime t) {
    if (t < current_time_) {
      throw std::invalid_argument("time cannot decrease");
    }
    current_time_ = t;
  }

  std::uint64_t issue_seq() { return next_seq_++; }

 private:
  static bool later(const Entry& a, const Entry& b) {
    return a.at > b.at || (a.at == b.at && a.seq > b.seq);
  }

  std::vector<Entry> heap_;
  std::uint64_t next_seq_ = 0;
  SimTime current_time_ = 0;
};

}  // namespace flowsim
