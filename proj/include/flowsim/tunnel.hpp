#pragma once

#include <cstdint>
#include <deque>

#include "flowsim/sim_time.hpp"

namespace flowsim {

// A store-and-forward FIFO link: fixed capacity, fixed one-way propagation
// delay, unbounded queue. Departures are computed in closed form at
// enqueue time; `busy_until` carries the serializer state.
class Tunnel {
 public:
  Tunnel(std::int64_t capacity_bps, SimTime prop_delay)
      : capacity_bps_(capacity_bps), prop_delay_(prop_delay) {}

  // Accepts one packet at `now`; returns its arrival time at the far end.
  // FIFO and work conservation fall out of the busy_until recurrence:
  // serialization starts at max(now, busy_until) and never idles while
  // packets are waiting.
  SimTime enqueue(std::uint32_t size_bytes, SimTime now) {
    const SimTime ser = serialization_time(size_bytes, capacity_bps_);
    const SimTime start = busy_until_ > now ? busy_until_ : now;
    busy_until_ = start + ser;
    ++pkts_sent_;
    bytes_sent_ += size_bytes;

    // queue depth = packets not yet fully serialized at `now`
    while (!ser_ends_.empty() && ser_ends_.front() <= now) {
      ser_ends_.pop_front();
    }
    ser_ends_.push_back(busy_until_);
    if (ser_ends_.size() > max_queue_depth_) {
      max_queue_depth_ = ser_ends_.size();
    }
    return busy_until_ + prop_delay_;
  }

  std::int64_t capacity_bps() const { return capacity_bps_; }
  SimTime prop_delay() const { return prop_delay_; }
  SimTime busy_until() const { return busy_until_; }
  std::uint64_t pkts_sent() const { return pkts_sent_; }
  std::uint64_t bytes_sent() const { return bytes_sent_; }
  std::size_t max_queue_depth() const { return max_queue_depth_; }

 private:
  std::int64_t capacity_bps_;
  SimTime prop_delay_;
  SimTime busy_until_ = 0;
  std::uint64_t pkts_sent_ = 0;
  std::uint64_t bytes_sent_ = 0;
  std::deque<SimTime> ser_ends_;
  std::size_t max_queue_depth_ = 0;
};

}  // namespace flowsim
