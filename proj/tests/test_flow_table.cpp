#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <unordered_map>

#include "flowsim/flow_table.hpp"
#include "flowsim/packet_header.hpp"

using namespace flowsim;

namespace {
const FiveTuple kFlow{0x0a000001, 0x0a000002, 40000, 443, kProtocolTcp};
}

TEST_CASE("records are created on first observation and count exactly") {
  FlowTable table(40);
  REQUIRE_FALSE(table.contains(kFlow));
  for (std::uint64_t i = 1; i <= 100; ++i) {
    REQUIRE(table.observe(kFlow, from_us(static_cast<std::int64_t>(i))) == i);
  }
  REQUIRE(table.size() == 1);
  REQUIRE(table.find(kFlow)->pkt_count == 100);
}

TEST_CASE("classify is a read-only threshold comparison") {
  FlowTable table(40);
  REQUIRE(table.classify(kFlow) == FlowClass::Short);  // absent tuple
  for (int i = 0; i < 39; ++i) {
    table.observe(kFlow, 0);
  }
  REQUIRE(table.classify(kFlow) == FlowClass::Short);  // count == T-1
  table.observe(kFlow, 0);
  REQUIRE(table.classify(kFlow) == FlowClass::Long);  // count == T
  REQUIRE(table.find(kFlow)->pkt_count == 40);        // classify did not count
}

TEST_CASE("direction-sensitive keys") {
  FlowTable table(40);
  FiveTuple reverse{kFlow.dst_addr, kFlow.src_addr, kFlow.dst_port, kFlow.src_port, kFlow.protocol};
  table.observe(kFlow, 0);
  REQUIRE_FALSE(table.contains(reverse));
  table.observe(reverse, 0);
  REQUIRE(table.size() == 2);
}

TEST_CASE("idle eviction uses a strict 30 s boundary") {
  FlowTable table(40, 30 * kNsPerSec);
  table.observe(kFlow, 0);

  SECTION("exactly 30 s idle survives") {
    REQUIRE(table.evict_idle(from_us(30'000'000)) == 0);
    REQUIRE(table.contains(kFlow));
  }
  SECTION("30 s + 1 us idle is evicted") {
    REQUIRE(table.evict_idle(from_us(30'000'001)) == 1);
    REQUIRE_FALSE(table.contains(kFlow));
  }
  SECTION("empty table evicts nothing") {
    FlowTable empty(40);
    REQUIRE(empty.evict_idle(from_us(99'000'000)) == 0);
  }
}

TEST_CASE("eviction keeps survivors untouched") {
  FlowTable table(40, 30 * kNsPerSec);
  FiveTuple fresh = kFlow;
  fresh.src_port = 40001;
  table.observe(kFlow, 0);
  for (int i = 0; i < 5; ++i) {
    table.observe(fresh, from_sec(25.0));
  }
  REQUIRE(table.evict_idle(from_sec(31.0)) == 1);
  REQUIRE(table.find(fresh)->pkt_count == 5);
  REQUIRE(table.find(fresh)->last_seen == from_sec(25.0));
}

TEST_CASE("flow map behaves like a reference map under churn") {
  FlowMap map;
  std::unordered_map<std::uint64_t, FlowRecord> ref;
  std::mt19937_64 rng(99);
  auto tuple_of = [](std::uint64_t id) {
    return FiveTuple{static_cast<std::uint32_t>(id >> 16), 0x0a000002,
                     static_cast<std::uint16_t>(id & 0xFFFF), 443, kProtocolTcp};
  };
  for (int step = 0; step < 200'000; ++step) {
    const std::uint64_t id = rng() % 5000;
    const auto op = rng() % 10;
    if (op < 7) {
      FlowRecord& rec = map.find_or_insert(tuple_of(id));
      ++rec.pkt_count;
      rec.last_seen = step;
      FlowRecord& r = ref[id];
      ++r.pkt_count;
      r.last_seen = step;
    } else if (op < 9) {
      const FlowRecord* got = map.find(tuple_of(id));
      auto it = ref.find(id);
      if (it == ref.end()) {
        REQUIRE(got == nullptr);
      } else {
        REQUIRE(got != nullptr);
        REQUIRE(got->pkt_count == it->second.pkt_count);
        REQUIRE(got->last_seen == it->second.last_seen);
      }
    } else {
      const std::uint64_t cutoff = step > 1000 ? step - 1000 : 0;
      const std::size_t erased = map.erase_if(
          [cutoff](const FiveTuple&, const FlowRecord& rec) {
            return rec.last_seen < static_cast<SimTime>(cutoff);
          });
      std::size_t ref_erased = 0;
      for (auto it = ref.begin(); it != ref.end();) {
        if (it->second.last_seen < static_cast<SimTime>(cutoff)) {
          it = ref.erase(it);
          ++ref_erased;
        } else {
          ++it;
        }
      }
      REQUIRE(erased == ref_erased);
    }
    if (step % 50'000 == 0) {
      REQUIRE(map.size() == ref.size());
    }
  }
  REQUIRE(map.size() == ref.size());
}

TEST_CASE("no surviving entry exceeds the idle timeout after a sweep") {
  FlowTable table(8, 30 * kNsPerSec);
  for (std::uint16_t p = 0; p < 200; ++p) {
    FiveTuple t = kFlow;
    t.src_port = p;
    table.observe(t, from_sec(0.37 * p));
  }
  const SimTime now = from_sec(60.0);
  table.evict_idle(now);
  for (std::uint16_t p = 0; p < 200; ++p) {
    FiveTuple t = kFlow;
    t.src_port = p;
    if (const FlowRecord* rec = table.find(t)) {
      REQUIRE(now - rec->last_seen <= table.idle_timeout());
    }
  }
}
