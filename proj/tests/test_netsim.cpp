#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "flowsim/event_queue.hpp"
#include "flowsim/experiment.hpp"
#include "flowsim/report.hpp"
#include "flowsim/routing.hpp"
#include "flowsim/simulation.hpp"
#include "flowsim/tunnel.hpp"

using namespace flowsim;

namespace {

Packet app_packet(std::uint64_t flow, std::uint32_t seq, SimTime t,
                  std::uint32_t size = 1500) {
  FiveTuple tuple{0x0a010001, 0x0a020002, static_cast<std::uint16_t>(1024 + flow), 443,
                  kProtocolTcp};
  return make_packet(flow, tuple, size, seq, t);
}

SimConfig quiet_config(RoutingPolicy policy = RoutingPolicy::SplitterToS) {
  SimConfig cfg;
  cfg.policy = policy;
  return cfg;
}

}  // namespace

TEST_CASE("tunnel serialization: 1500 B at 1 Gbps takes exactly 12 us") {
  Tunnel t(1'000'000'000, 0);
  REQUIRE(t.enqueue(1500, 0) == from_us(12));
}

TEST_CASE("tunnel FIFO: five back-to-back 1500 B packets, 1000 us propagation") {
  Tunnel t(1'000'000'000, from_us(1000));
  SimTime last = 0;
  for (int i = 0; i < 5; ++i) {
    last = t.enqueue(1500, 0);
  }
  REQUIRE(last == from_us(5 * 12 + 1000));
  REQUIRE(t.max_queue_depth() == 5);
}

TEST_CASE("tunnel work conservation across an idle gap") {
  Tunnel t(1'000'000'000, 0);
  REQUIRE(t.enqueue(1500, 0) == from_us(12));
  // arrives after the link went idle: serialization restarts at `now`
  REQUIRE(t.enqueue(1500, from_us(100)) == from_us(112));
}

TEST_CASE("packets below 20 B or above the MTU are rejected at construction") {
  REQUIRE_THROWS_AS(app_packet(1, 0, 0, 19), std::invalid_argument);
  REQUIRE_THROWS_AS(app_packet(1, 0, 0, 1501), std::invalid_argument);
  REQUIRE_NOTHROW(app_packet(1, 0, 0, 20));
}

TEST_CASE("event queue orders by time with insertion-order tie break") {
  EventQueue<int> q;
  q.schedule(from_us(10), 1);
  q.schedule(from_us(5), 2);
  q.schedule(from_us(10), 3);
  q.schedule(from_us(5), 4);
  std::vector<int> order;
  while (!q.empty()) {
    order.push_back(q.pop().event);
  }
  REQUIRE(order == std::vector<int>{2, 4, 1, 3});
  REQUIRE(q.current_time() == from_us(10));
  REQUIRE_THROWS_AS(q.schedule(from_us(9), 5), std::invalid_argument);
}

TEST_CASE("inject_packet honors time ordering rules") {
  Simulation sim(quiet_config());
  sim.inject_packet(app_packet(1, 0, 0), 0);  // at current time: fine
  sim.inject_packet(app_packet(1, 1, 0), from_us(3));
  sim.inject_packet(app_packet(1, 2, 0), from_us(3));  // same timestamp: injection order
  sim.run_until(from_us(2000));
  REQUIRE(sim.delivered_packets() == 3);
  const auto& tr = sim.trace();
  REQUIRE(tr[0].seq == 0);
  REQUIRE(tr[1].seq == 1);
  REQUIRE(tr[2].seq == 2);
  REQUIRE_THROWS_AS(sim.inject_packet(app_packet(1, 3, 0), from_us(1)), std::invalid_argument);
}

TEST_CASE("run_until with no pending events just advances the clock") {
  Simulation sim(quiet_config());
  sim.run_until(from_sec(1.0));
  REQUIRE(sim.now() == from_sec(1.0));
  sim.run_until(from_sec(1.0));  // no-op
  REQUIRE(sim.now() == from_sec(1.0));
  REQUIRE_THROWS_AS(sim.run_until(from_us(1)), std::invalid_argument);
}

TEST_CASE("closed-form FCT for a lone back-to-back flow") {
  for (std::uint32_t n : {1u, 5u, 100u}) {
    SimConfig cfg = quiet_config();
    cfg.threshold = 1000;  // keep the whole flow short-marked, on one tunnel
    Simulation sim(cfg);
    for (std::uint32_t i = 0; i < n; ++i) {
      sim.inject_packet(app_packet(7, i, 0), 0);
    }
    sim.run_until(from_sec(1.0));
    REQUIRE(sim.delivered_packets() == n);
    SimTime first_egress = sim.trace().front().t_splitter_egress;
    SimTime last_ingress = sim.trace().back().t_dest_ingress;
    REQUIRE(last_ingress - first_egress == from_us(12 * n + 1000));
  }
}

TEST_CASE("routing policies") {
  RouterState state;
  Packet pkt = app_packet(1, 0, 0);

  SECTION("splitter routes by ToS mark") {
    pkt.header = pkt.header.with_tos(0x08);
    REQUIRE(route(RoutingPolicy::SplitterToS, pkt, state) == 1);
    pkt.header = pkt.header.with_tos(0x00);
    REQUIRE(route(RoutingPolicy::SplitterToS, pkt, state) == 0);
  }
  SECTION("unknown marks fail toward the short tunnel and are counted") {
    pkt.header = pkt.header.with_tos(0x55);
    REQUIRE(route(RoutingPolicy::SplitterToS, pkt, state) == 0);
    REQUIRE(state.unknown_tos_count == 1);
  }
  SECTION("per-packet ECMP alternates exactly") {
    std::vector<int> idx;
    for (int i = 0; i < 4; ++i) {
      idx.push_back(route(RoutingPolicy::EcmpPerPacket, pkt, state));
    }
    REQUIRE(idx == std::vector<int>{0, 1, 0, 1});
  }
  SECTION("per-flow ECMP pins all packets of a flow to one tunnel") {
    const int first = route(RoutingPolicy::EcmpPerFlow, pkt, state);
    for (int i = 0; i < 100; ++i) {
      REQUIRE(route(RoutingPolicy::EcmpPerFlow, pkt, state) == first);
    }
  }
}

namespace {

ExperimentConfig mini_config() {
  ExperimentConfig c;
  c.horizon_s = 3.0;
  c.warmup_s = 0.5;
  c.flow_rate_per_s = 40.0;
  c.query_mix.categories = {{5, 0.6}, {40, 0.3}, {600, 0.1}};
  c.burst_packets = 64;
  c.flow_pace_mbps = 200.0;
  c.background_utilization = 0.2;
  c.seed = 77;
  return c;
}

}  // namespace

TEST_CASE("conservation: injected == delivered + in flight at every sampled instant") {
  Simulation sim(sim_config_for(mini_config(), RoutingPolicy::SplitterToS));
  sim.attach_workload(WorkloadPlan::build(workload_config_for(mini_config(), 77)));
  for (int step = 1; step <= 30; ++step) {
    sim.run_until(from_sec(0.1 * step));
    REQUIRE(sim.injected_packets() == sim.delivered_packets() + sim.in_flight_packets());
  }
}

TEST_CASE("per-tunnel FIFO holds over a busy randomized run") {
  Simulation sim(sim_config_for(mini_config(), RoutingPolicy::EcmpPerPacket));
  sim.attach_workload(WorkloadPlan::build(workload_config_for(mini_config(), 5)));
  sim.run_until(from_sec(3.0));
  SimTime last_ingress[2] = {0, 0};
  std::map<std::pair<std::uint64_t, int>, std::int64_t> last_seq;
  for (const auto& rec : sim.trace()) {
    REQUIRE(rec.t_dest_ingress >= last_ingress[rec.tunnel]);
    last_ingress[rec.tunnel] = rec.t_dest_ingress;
    auto key = std::make_pair(rec.flow_id, static_cast<int>(rec.tunnel));
    auto it = last_seq.find(key);
    if (it != last_seq.end()) {
      REQUIRE(static_cast<std::int64_t>(rec.seq) > it->second);
    }
    last_seq[key] = rec.seq;
  }
}

TEST_CASE("per-packet ECMP keeps tunnel packet counts within one") {
  Simulation sim(sim_config_for(mini_config(), RoutingPolicy::EcmpPerPacket));
  sim.attach_workload(WorkloadPlan::build(workload_config_for(mini_config(), 9)));
  sim.run_until(from_sec(3.0));
  const auto a = sim.tunnel(0).pkts_sent();
  const auto b = sim.tunnel(1).pkts_sent();
  REQUIRE((a > b ? a - b : b - a) <= 1);
}

TEST_CASE("no long-marked packet ever rides the short tunnel") {
  Simulation sim(sim_config_for(mini_config(), RoutingPolicy::SplitterToS));
  sim.attach_workload(WorkloadPlan::build(workload_config_for(mini_config(), 13)));
  sim.run_until(from_sec(3.0));
  for (const auto& rec : sim.trace()) {
    if (rec.tunnel == 0) {
      REQUIRE(rec.tos == 0x00);
    } else {
      REQUIRE(rec.tos == 0x08);
    }
  }
}

TEST_CASE("bypass mode pins background streams to alternating tunnels") {
  ExperimentConfig c = mini_config();
  c.background_bypass = true;
  for (RoutingPolicy policy : {RoutingPolicy::SplitterToS, RoutingPolicy::EcmpPerPacket}) {
    Simulation sim(sim_config_for(c, policy));
    sim.attach_workload(WorkloadPlan::build(workload_config_for(c, 4)));
    sim.run_until(from_sec(3.0));
    std::uint64_t bg_seen = 0;
    for (const auto& rec : sim.trace()) {
      if (rec.flow_id < kAppFlowIdBase) {
        ++bg_seen;
        // stream s (flow_id base+s) is nailed to tunnel s%2, unmarked
        REQUIRE(rec.tunnel == (rec.flow_id - kBackgroundFlowIdBase) % 2);
        REQUIRE(rec.tos == 0x00);
      }
    }
    REQUIRE(bg_seen > 1000);
    // bypassed packets never traverse the splitter's flow table
    if (policy == RoutingPolicy::SplitterToS) {
      for (const auto& stream : sim.plan().bg_streams) {
        REQUIRE_FALSE(sim.flow_table().contains(stream.tuple));
      }
    }
  }
}

TEST_CASE("identical (config, seed) runs produce identical traces") {
  auto run_hash = [] {
    Simulation sim(sim_config_for(mini_config(), RoutingPolicy::SplitterToS));
    sim.attach_workload(WorkloadPlan::build(workload_config_for(mini_config(), 21)));
    sim.run_until(from_sec(3.0));
    return hash_trace(sim.trace());
  };
  REQUIRE(run_hash() == run_hash());
}
