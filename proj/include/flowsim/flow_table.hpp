#pragma once

#include <cstdint>

#include "flowsim/five_tuple.hpp"
#include "flowsim/flow_map.hpp"
#include "flowsim/sim_time.hpp"

namespace flowsim {

enum class FlowClass : std::uint8_t { Short, Long };

// Per-flow packet counter keyed by 5-tuple, the software analogue of a
// BPF hash map on a border router. Single writer; instantiate one table
// per router.
class FlowTable {
 public:
  explicit FlowTable(std::uint64_t threshold = 40, SimTime idle_timeout = 30 * kNsPerSec)
      : threshold_(threshold), idle_timeout_(idle_timeout) {}

  std::uint64_t threshold() const { return threshold_; }
  SimTime idle_timeout() const { return idle_timeout_; }
  std::size_t size() const { return entries_.size(); }
  bool contains(const FiveTuple& t) const { return entries_.find(t) != nullptr; }
  const FlowRecord* find(const FiveTuple& t) const { return entries_.find(t); }

  // Creates the record on first sight, then counts the packet. Returns
  // the updated count.
  std::uint64_t observe(const FiveTuple& t, SimTime now) {
    FlowRecord& rec = entries_.find_or_insert(t);
    ++rec.pkt_count;
    rec.last_seen = now;
    return rec.pkt_count;
  }

  // Long iff the observed count has reached the threshold. Read-only.
  FlowClass classify(const FiveTuple& t) const {
    const FlowRecord* rec = entries_.find(t);
    return (rec != nullptr && rec->pkt_count >= threshold_) ? FlowClass::Long : FlowClass::Short;
  }

  // Drops every record idle strictly longer than the timeout. A record
  // idle for exactly the timeout survives.
  std::size_t evict_idle(SimTime now) {
    return entries_.erase_if(
        [this, now](const FiveTuple&, const FlowRecord& rec) {
          return now - rec.last_seen > idle_timeout_;
        });
  }

  void reserve(std::size_t n) { entries_.reserve(n); }

 private:
  std::uint64_t threshold_;
  SimTime idle_timeout_;
  FlowMap entries_;
};

}  // namespace flowsim
