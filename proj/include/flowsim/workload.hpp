#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "flowsim/five_tuple.hpp"
#include "flowsim/packet.hpp"
#include "flowsim/rng.hpp"
#include "flowsim/sim_time.hpp"

namespace flowsim {

enum class FlowKind : std::uint8_t { App, Background };

constexpr std::uint64_t kBackgroundFlowIdBase = 1;
constexpr std::uint64_t kAppFlowIdBase = 1000;

// One generated flow: `n_packets` equal-size packets injected at the
// source router as bursts of `burst_packets`, one burst every
// `burst_interval` (0 = the whole flow back-to-back at start_time).
struct FlowSpec {
  std::uint64_t flow_id = 0;
  FiveTuple tuple;
  std::uint32_t n_packets = 1;
  std::uint32_t packet_size_bytes = kDefaultMtu;
  SimTime start_time = 0;
  FlowKind kind = FlowKind::App;
  std::uint32_t burst_packets = 0;  // 0 = everything in one burst
  SimTime burst_interval = 0;
};

struct QueryCategory {
  std::uint32_t packets;
  double weight;
};

// Catalogue of application query sizes, from directory listings (~5
// packets) through video playback (~60k) to large uploads (>100k).
struct QueryMix {
  std::vector<QueryCategory> categories{
      {5, 0.90}, {40, 0.08}, {60'000, 0.013}, {120'000, 0.007}};

  void validate() const {
    if (categories.empty()) {
      throw std::invalid_argument("query mix must not be empty");
    }
    for (const auto& c : categories) {
      if (c.weight <= 0.0 || c.packets == 0) {
        throw std::invalid_argument("query mix entries need positive weight and size");
      }
    }
  }

  double mean_packets() const {
    double total_w = 0.0;
    double total = 0.0;
    for (const auto& c : categories) {
      total_w += c.weight;
      total += c.weight * c.packets;
    }
    return total / total_w;
  }
};

// Competing wide-area traffic: fixed-size messages at a Poisson rate
// filling `utilization` of the combined tunnel capacity, grouped into a
// handful of persistent flows.
struct BackgroundLoad {
  double utilization = 0.0;            // fraction of combined capacity
  std::uint32_t message_bytes = 1472;  // payload; on the wire +28 B of headers
  std::uint32_t streams = 4;
  bool bypass = false;  // true: inject per-tunnel, skipping the border router

  std::uint32_t wire_bytes() const { return message_bytes + 28; }

  double message_rate_per_s(std::int64_t combined_capacity_bps) const {
    return utilization * static_cast<double>(combined_capacity_bps) /
           (8.0 * wire_bytes());
  }
};

// Poisson arrival instants over [0, horizon), sorted ascending.
inline std::vector<SimTime> sample_flow_arrivals(double rate_per_s, SimTime horizon, Rng& rng) {
  if (rate_per_s <= 0.0) {
    throw std::invalid_argument("arrival rate must be positive");
  }
  std::vector<SimTime> arrivals;
  double t_s = 0.0;
  while (true) {
    t_s += rng.exponential(rate_per_s);
    const SimTime t = static_cast<SimTime>(std::llround(t_s * 1e9));
    if (t >= horizon) {
      break;
    }
    arrivals.push_back(t);
  }
  return arrivals;
}

// Hands out one fresh client-side 5-tuple per query, walking a
// deterministic ephemeral port (and, on wrap, address) counter.
class TupleAllocator {
 public:
  FiveTuple next_app_tuple() {
    const std::uint32_t n = counter_++;
    return FiveTuple{0x0a010001 + n / 60'000, 0x0a020002,
                     static_cast<std::uint16_t>(1024 + n % 60'000), 443, kProtocolTcp};
  }

  static FiveTuple background_tuple(std::uint32_t stream) {
    return FiveTuple{0xac100001 + stream, 0xac100064,
                     static_cast<std::uint16_t>(20'000 + stream), 9000, kProtocolTcp};
  }

 private:
  std::uint32_t counter_ = 0;
};

inline FlowSpec sample_query(const QueryMix& mix, Rng& rng, TupleAllocator& tuples) {
  mix.validate();
  std::vector<double> weights;
  weights.reserve(mix.categories.size());
  for (const auto& c : mix.categories) {
    weights.push_back(c.weight);
  }
  FlowSpec spec;
  spec.n_packets = mix.categories[rng.weighted_index(weights)].packets;
  spec.tuple = tuples.next_app_tuple();
  spec.kind = FlowKind::App;
  return spec;
}

// A live Poisson message source backing one long-lived background flow.
struct BackgroundStream {
  std::uint64_t flow_id = 0;
  FiveTuple tuple;
  std::uint32_t wire_bytes = 1500;
  double rate_per_s = 0.0;
  std::uint64_t seed = 0;
  std::int8_t forced_tunnel = -1;  // >= 0 in bypass mode
};

struct WorkloadConfig {
  double flow_rate_per_s = 5.0;
  QueryMix mix;
  std::uint32_t packet_size_bytes = kDefaultMtu;
  std::uint32_t burst_packets = 5120;
  double flow_pace_bps = 80e6;  // average pacing of multi-burst flows; 0 = back-to-back
  double short_packet_gap_us = 25.0;  // source spacing inside single-burst flows; 0 = back-to-back
  BackgroundLoad background;
  std::int64_t combined_capacity_bps = 2'000'000'000;
  SimTime horizon = from_sec(120.0);
  std::uint64_t seed = 1;
};

// Fully materialized application flow list plus live background streams.
// Everything downstream is a pure function of (config, seed).
struct WorkloadPlan {
  std::vector<FlowSpec> app_flows;
  std::vector<BackgroundStream> bg_streams;
  SimTime horizon = 0;

  static WorkloadPlan build(const WorkloadConfig& cfg) {
    cfg.mix.validate();
    if (cfg.background.utilization < 0.0 || cfg.background.utilization > 1.0) {
      throw std::invalid_argument("background utilization must lie in [0, 1]");
    }
    WorkloadPlan plan;
    plan.horizon = cfg.horizon;

    Rng arrival_rng(derive_seed(cfg.seed, 0));
    Rng size_rng(derive_seed(cfg.seed, 1));
    TupleAllocator tuples;

    const auto arrivals = sample_flow_arrivals(cfg.flow_rate_per_s, cfg.horizon, arrival_rng);
    const SimTime short_gap = static_cast<SimTime>(std::llround(cfg.short_packet_gap_us * 1e3));
    plan.app_flows.reserve(arrivals.size());
    for (std::size_t i = 0; i < arrivals.size(); ++i) {
      FlowSpec spec = sample_query(cfg.mix, size_rng, tuples);
      spec.flow_id = kAppFlowIdBase + i;
      spec.packet_size_bytes = cfg.packet_size_bytes;
      spec.start_time = arrivals[i];
      spec.burst_packets = cfg.burst_packets;
      if (cfg.burst_packets == 0 || spec.n_packets <= cfg.burst_packets) {
        // fits one burst: an RPC-scale response, emitted packet by packet
        // at host pacing rather than as one line-rate burst
        if (short_gap > 0 && spec.n_packets > 1) {
          spec.burst_packets = 1;
          spec.burst_interval = short_gap;
        }
      } else if (cfg.flow_pace_bps > 0.0) {
        // bulk transfer: line-rate socket-buffer bursts, paced on average
        const double burst_bits = 8.0 * cfg.burst_packets * cfg.packet_size_bytes;
        spec.burst_interval = static_cast<SimTime>(std::llround(burst_bits / cfg.flow_pace_bps * 1e9));
      }
      plan.app_flows.push_back(spec);
    }

    if (cfg.background.utilization > 0.0) {
      const double per_stream_rate =
          cfg.background.message_rate_per_s(cfg.combined_capacity_bps) / cfg.background.streams;
      for (std::uint32_t s = 0; s < cfg.background.streams; ++s) {
        BackgroundStream stream;
        stream.flow_id = kBackgroundFlowIdBase + s;
        stream.tuple = TupleAllocator::background_tuple(s);
        stream.wire_bytes = cfg.background.wire_bytes();
        stream.rate_per_s = per_stream_rate;
        stream.seed = derive_seed(cfg.seed, 16 + s);
        stream.forced_tunnel = cfg.background.bypass ? static_cast<std::int8_t>(s % 2) : -1;
        plan.bg_streams.push_back(stream);
      }
    }
    return plan;
  }
};

}  // namespace flowsim
