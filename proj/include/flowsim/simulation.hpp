#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <vector>

#include "flowsim/event_queue.hpp"
#include "flowsim/flow_table.hpp"
#include "flowsim/packet.hpp"
#include "flowsim/routing.hpp"
#include "flowsim/splitter.hpp"
#include "flowsim/tunnel.hpp"
#include "flowsim/workload.hpp"

namespace flowsim {

struct SimConfig {
  std::int64_t tunnel_capacity_bps = 1'000'000'000;
  SimTime tunnel_prop_delay = from_us(1000);
  std::uint32_t mtu = kDefaultMtu;
  RoutingPolicy policy = RoutingPolicy::SplitterToS;
  std::uint64_t threshold = 40;
  SimTime idle_timeout = 30 * kNsPerSec;
  SimTime eviction_period = 1 * kNsPerSec;
  TosMarks marks;
};

// One delivered packet, in destination arrival order. This is the record
// every metric is computed from and the row format of the trace CSV.
struct DeliveredRecord {
  std::uint64_t flow_id;
  std::uint32_t seq;
  std::uint8_t tunnel;
  std::uint8_t tos;
  SimTime t_created;
  SimTime t_splitter_egress;
  SimTime t_dest_ingress;
};

// Source border router (optionally running the flow splitter), two
// identical tunnels, destination border router. Strictly single-threaded;
// all randomness lives in the attached workload streams.
class Simulation {
 public:
  static constexpr int kTunnels = 2;

  explicit Simulation(const SimConfig& cfg)
      : cfg_(cfg),
        table_(cfg.threshold, cfg.idle_timeout),
        tunnels_{Tunnel(cfg.tunnel_capacity_bps, cfg.tunnel_prop_delay),
                 Tunnel(cfg.tunnel_capacity_bps, cfg.tunnel_prop_delay)} {}

  // Schedules the plan's injections. Call once, before running.
  void attach_workload(const WorkloadPlan& plan) {
    plan_ = plan;
    bg_rngs_.clear();
    bg_sent_.assign(plan_.bg_streams.size(), 0);
    for (std::size_t i = 0; i < plan_.app_flows.size(); ++i) {
      events_.schedule(plan_.app_flows[i].start_time,
                       SimEvent{SimEvent::Kind::FlowBurst, static_cast<std::uint32_t>(i), 0});
    }
    for (std::size_t s = 0; s < plan_.bg_streams.size(); ++s) {
      bg_rngs_.emplace_back(plan_.bg_streams[s].seed);
      schedule_bg_message(static_cast<std::uint32_t>(s), 0);
    }
    if (cfg_.policy == RoutingPolicy::SplitterToS && cfg_.eviction_period > 0) {
      events_.schedule(cfg_.eviction_period, SimEvent{SimEvent::Kind::EvictionSweep, 0, 0});
    }
  }

  // Direct injection at the source router (the workload -> simulator
  // boundary). `at` must not lie in the past.
  void inject_packet(const Packet& pkt, SimTime at) {
    pending_.push_back(pkt);
    events_.schedule(at, SimEvent{SimEvent::Kind::InjectPacket,
                                  static_cast<std::uint32_t>(pending_.size() - 1), 0});
  }

  // Processes every event with timestamp <= t_end in (time, seq) order,
  // then pins the clock at t_end.
  void run_until(SimTime t_end) {
    if (t_end < now()) {
      throw std::invalid_argument("run_until target lies in the past");
    }
    while (true) {
      const int src = next_source(t_end);
      if (src < 0) {
        break;
      }
      if (src == kControlSource) {
        auto entry = events_.pop();
        dispatch(entry.event, entry.at);
      } else {
        InFlight f = std::move(in_flight_[src].front());
        in_flight_[src].pop_front();
        events_.advance_to(f.deliver_at);
        deliver(f, src);
      }
    }
    events_.advance_to(t_end);
  }

  SimTime now() const { return events_.current_time(); }
  const SimConfig& config() const { return cfg_; }
  const std::vector<DeliveredRecord>& trace() const { return trace_; }
  std::vector<DeliveredRecord> take_trace() { return std::move(trace_); }
  const Tunnel& tunnel(int i) const { return tunnels_[static_cast<std::size_t>(i)]; }
  const FlowTable& flow_table() const { return table_; }
  const WorkloadPlan& plan() const { return plan_; }

  std::uint64_t injected_packets() const { return injected_; }
  std::uint64_t delivered_packets() const { return delivered_; }
  std::uint64_t in_flight_packets() const { return in_flight_[0].size() + in_flight_[1].size(); }
  std::uint64_t malformed_packets() const { return malformed_; }
  std::uint64_t unknown_tos_packets() const { return router_.unknown_tos_count; }
  std::uint64_t evicted_flows() const { return evicted_; }

 private:
  struct SimEvent {
    enum class Kind : std::uint8_t { InjectPacket, FlowBurst, BackgroundMessage, EvictionSweep };
    Kind kind;
    std::uint32_t a;  // flow index / stream index / pending-injection index
    std::uint32_t b;  // burst index
  };

  struct InFlight {
    SimTime deliver_at;
    std::uint64_t order;
    Packet pkt;
  };

  static constexpr int kControlSource = kTunnels;

  // Picks the earliest pending item among the control queue and the two
  // tunnel delivery queues; ties resolve by global insertion order.
  int next_source(SimTime t_end) const {
    SimTime best_at = t_end;
    std::uint64_t best_order = 0;
    int best = -1;
    for (int i = 0; i < kTunnels; ++i) {
      if (!in_flight_[i].empty()) {
        const InFlight& f = in_flight_[i].front();
        if (f.deliver_at <= t_end &&
            (best < 0 || f.deliver_at < best_at ||
             (f.deliver_at == best_at && f.order < best_order))) {
          best = i;
          best_at = f.deliver_at;
          best_order = f.order;
        }
      }
    }
    if (!events_.empty()) {
      const auto& top = events_.top();
      if (top.at <= t_end &&
          (best < 0 || top.at < best_at || (top.at == best_at && top.seq < best_order))) {
        best = kControlSource;
      }
    }
    return best;
  }

  void dispatch(const SimEvent& ev, SimTime at) {
    switch (ev.kind) {
      case SimEvent::Kind::InjectPacket: {
        Packet pkt = pending_[ev.a];
        process_arrival(pkt, at);
        break;
      }
      case SimEvent::Kind::FlowBurst:
        inject_burst(ev.a, ev.b, at);
        break;
      case SimEvent::Kind::BackgroundMessage:
        inject_bg_message(ev.a, at);
        break;
      case SimEvent::Kind::EvictionSweep:
        evicted_ += table_.evict_idle(at);
        events_.schedule(at + cfg_.eviction_period, SimEvent{SimEvent::Kind::EvictionSweep, 0, 0});
        break;
    }
  }

  // Splitter (when routing by ToS), tunnel selection, and enqueue.
  void process_arrival(Packet& pkt, SimTime now) {
    pkt.t_splitter_egress = now;
    int tunnel_idx;
    if (pkt.forced_tunnel >= 0) {
      tunnel_idx = pkt.forced_tunnel;
    } else {
      if (cfg_.policy == RoutingPolicy::SplitterToS) {
        SplitResult r = process_packet(table_, pkt.header, pkt.tuple.src_port,
                                       pkt.tuple.dst_port, now, cfg_.marks);
        if (r.malformed) {
          ++malformed_;
        } else {
          pkt.header = r.header;
        }
      }
      tunnel_idx = route(cfg_.policy, pkt, router_, cfg_.marks);
    }
    pkt.t_dest_ingress = tunnels_[static_cast<std::size_t>(tunnel_idx)].enqueue(pkt.size_bytes, now);
    ++injected_;
    in_flight_[tunnel_idx].push_back(InFlight{pkt.t_dest_ingress, events_.issue_seq(), pkt});
  }

  void inject_burst(std::uint32_t flow_idx, std::uint32_t burst_idx, SimTime now) {
    const FlowSpec& flow = plan_.app_flows[flow_idx];
    const bool paced = flow.burst_interval > 0 && flow.burst_packets > 0;
    const std::uint32_t first = paced ? burst_idx * flow.burst_packets : 0;
    const std::uint32_t last = paced
        ? std::min(flow.n_packets, first + flow.burst_packets)
        : flow.n_packets;
    for (std::uint32_t i = first; i < last; ++i) {
      Packet pkt = make_packet(flow.flow_id, flow.tuple, flow.packet_size_bytes, i, now, cfg_.mtu);
      process_arrival(pkt, now);
    }
    if (paced && last < flow.n_packets) {
      events_.schedule(flow.start_time + static_cast<SimTime>(burst_idx + 1) * flow.burst_interval,
                       SimEvent{SimEvent::Kind::FlowBurst, flow_idx, burst_idx + 1});
    }
  }

  void inject_bg_message(std::uint32_t stream_idx, SimTime now) {
    const BackgroundStream& stream = plan_.bg_streams[stream_idx];
    Packet pkt = make_packet(stream.flow_id, stream.tuple, stream.wire_bytes,
                             bg_sent_[stream_idx]++, now, cfg_.mtu);
    pkt.forced_tunnel = stream.forced_tunnel;
    process_arrival(pkt, now);
    schedule_bg_message(stream_idx, now);
  }

  void schedule_bg_message(std::uint32_t stream_idx, SimTime now) {
    const BackgroundStream& stream = plan_.bg_streams[stream_idx];
    if (stream.rate_per_s <= 0.0) {
      return;
    }
    const double gap_s = bg_rngs_[stream_idx].exponential(stream.rate_per_s);
    const SimTime next = now + static_cast<SimTime>(std::llround(gap_s * 1e9));
    if (next < plan_.horizon) {
      events_.schedule(next, SimEvent{SimEvent::Kind::BackgroundMessage, stream_idx, 0});
    }
  }

  void deliver(const InFlight& f, int tunnel_idx) {
    ++delivered_;
    trace_.push_back(DeliveredRecord{f.pkt.flow_id, f.pkt.seq_in_flow,
                                     static_cast<std::uint8_t>(tunnel_idx), f.pkt.header.tos(),
                                     f.pkt.t_created, f.pkt.t_splitter_egress,
                                     f.pkt.t_dest_ingress});
  }

  SimConfig cfg_;
  FlowTable table_;
  std::array<Tunnel, kTunnels> tunnels_;
  RouterState router_;
  EventQueue<SimEvent> events_;
  std::array<std::deque<InFlight>, kTunnels> in_flight_;
  std::vector<Packet> pending_;
  WorkloadPlan plan_;
  std::vector<Rng> bg_rngs_;
  std::vector<std::uint32_t> bg_sent_;
  std::vector<DeliveredRecord> trace_;
  std::uint64_t injected_ = 0;
  std::uint64_t delivered_ = 0;
  std::uint64_t malformed_ = 0;
  std::uint64_t evicted_ = 0;
};

}  // namespace flowsim
