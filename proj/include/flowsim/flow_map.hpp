#pragma once

#include <cstdint>
#include <vector>

#include "flowsim/five_tuple.hpp"
#include "flowsim/sim_time.hpp"

namespace flowsim {

struct FlowRecord {
  std::uint64_t pkt_count = 0;
  SimTime last_seen = 0;
};

// Open-addressed hash map from FiveTuple to FlowRecord, linear probing
// over a flat slot array. One cache line per lookup keeps the per-packet
// cost flat even with a million resident flows, which a node-based map
// does not. Deletion uses tombstones; sweeps compact when they pile up.
class FlowMap {
 public:
  explicit FlowMap(std::size_t expected = 1024) { rehash(capacity_for(expected)); }

  std::size_t size() const { return live_; }

  const FlowRecord* find(const FiveTuple& key) const {
    std::size_t i = hash_tuple(key) & mask_;
    while (true) {
      const Slot& s = slots_[i];
      if (s.state == kEmpty) {
        return nullptr;
      }
      if (s.state == kFull && s.matches(key)) {
        return &s.rec;
      }
      i = (i + 1) & mask_;
    }
  }

  FlowRecord* find(const FiveTuple& key) {
    return const_cast<FlowRecord*>(static_cast<const FlowMap*>(this)->find(key));
  }

  // Returns the record for `key`, default-constructing it on first sight.
  FlowRecord& find_or_insert(const FiveTuple& key) {
    if ((live_ + tombs_ + 1) * 4 >= slots_.size() * 3) {
      rehash(capacity_for(live_ * 2 + 1));
    }
    std::size_t i = hash_tuple(key) & mask_;
    std::size_t first_tomb = kNoSlot;
    while (true) {
      Slot& s = slots_[i];
      if (s.state == kFull && s.matches(key)) {
        return s.rec;
      }
      if (s.state == kTomb && first_tomb == kNoSlot) {
        first_tomb = i;
      } else if (s.state == kEmpty) {
        const std::size_t target = first_tomb != kNoSlot ? first_tomb : i;
        Slot& t = slots_[target];
        if (t.state == kTomb) {
          --tombs_;
        }
        t.state = kFull;
        t.assign_key(key);
        t.rec = FlowRecord{};
        ++live_;
        return t.rec;
      }
      i = (i + 1) & mask_;
    }
  }

  // Removes every record matching `pred(key, record)`; returns the count.
  template <typename Pred>
  std::size_t erase_if(Pred pred) {
    std::size_t erased = 0;
    for (Slot& s : slots_) {
      if (s.state == kFull && pred(s.key(), s.rec)) {
        s.state = kTomb;
        --live_;
        ++tombs_;
        ++erased;
      }
    }
    if (tombs_ * 8 >= slots_.size()) {
      rehash(capacity_for(live_));
    }
    return erased;
  }

  void reserve(std::size_t n) {
    const std::size_t cap = capacity_for(n);
    if (cap > slots_.size()) {
      rehash(cap);
    }
  }

 private:
  enum : std::uint8_t { kEmpty = 0, kFull = 1, kTomb = 2 };
  static constexpr std::size_t kNoSlot = static_cast<std::size_t>(-1);

  // key fields inlined next to the state byte: 32 bytes per slot, two
  // slots per cache line
  struct Slot {
    std::uint32_t src_addr = 0;
    std::uint32_t dst_addr = 0;
    std::uint16_t src_port = 0;
    std::uint16_t dst_port = 0;
    std::uint8_t protocol = 0;
    std::uint8_t state = kEmpty;
    FlowRecord rec;

    bool matches(const FiveTuple& k) const {
      return src_addr == k.src_addr && dst_addr == k.dst_addr && src_port == k.src_port &&
             dst_port == k.dst_port && protocol == k.protocol;
    }
    void assign_key(const FiveTuple& k) {
      src_addr = k.src_addr;
      dst_addr = k.dst_addr;
      src_port = k.src_port;
      dst_port = k.dst_port;
      protocol = k.protocol;
    }
    FiveTuple key() const { return FiveTuple{src_addr, dst_addr, src_port, dst_port, protocol}; }
  };
  static_assert(sizeof(Slot) == 32);

  // smallest power of two holding n entries below 3/4 load
  static std::size_t capacity_for(std::size_t n) {
    std::size_t cap = 16;
    while (n * 4 >= cap * 3) {
      cap <<= 1;
    }
    return cap;
  }

  void rehash(std::size_t new_cap) {
    std::vector<Slot> old = std::move(slots_);
    slots_.assign(new_cap, Slot{});
    mask_ = new_cap - 1;
    tombs_ = 0;
    live_ = 0;
    for (const Slot& s : old) {
      if (s.state == kFull) {
        find_or_insert(s.key()) = s.rec;
      }
    }
  }

  std::vector<Slot> slots_;
  std::size_t mask_ = 0;
  std::size_t live_ = 0;
  std::size_t tombs_ = 0;
};

}  // namespace flowsim
