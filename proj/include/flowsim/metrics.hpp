#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "flowsim/simulation.hpp"
#include "flowsim/workload.hpp"

namespace flowsim {

// What the metrics layer knows about each flow the workload intended to
// send. n_packets == 0 marks an open-ended flow (background stream) that
// can never complete.
struct FlowInfo {
  std::uint64_t flow_id = 0;
  FlowKind kind = FlowKind::App;
  std::uint32_t n_packets = 0;
  std::uint32_t packet_size_bytes = 0;
  SimTime start_time = 0;
};

inline std::vector<FlowInfo> flow_registry(const WorkloadPlan& plan) {
  std::vector<FlowInfo> flows;
  flows.reserve(plan.app_flows.size() + plan.bg_streams.size());
  for (const auto& s : plan.bg_streams) {
    flows.push_back(FlowInfo{s.flow_id, FlowKind::Background, 0, s.wire_bytes, 0});
  }
  for (const auto& f : plan.app_flows) {
    flows.push_back(FlowInfo{f.flow_id, FlowKind::App, f.n_packets, f.packet_size_bytes, f.start_time});
  }
  return flows;
}

struct FlowStats {
  std::uint64_t flow_id = 0;
  FlowKind kind = FlowKind::App;
  std::uint32_t n_packets = 0;
  SimTime fct = 0;                      // t_dest_ingress(last) - t_splitter_egress(first)
  FlowClass class_at_end = FlowClass::Short;
  std::vector<SimTime> packet_delays;   // one-way delay per packet, indexed by seq
};

struct JitterSample {
  std::uint64_t flow_id = 0;
  std::vector<SimTime> values;  // |delay[i+1] - delay[i]|
};

struct FctResult {
  std::vector<FlowStats> flows;       // complete, post-warmup flows only
  std::uint64_t incomplete = 0;       // app flows still in flight at the horizon
  std::uint64_t warmup_excluded = 0;  // app flows that started before the cutoff
};

// Folds the delivered-packet trace into per-flow stats, applying the
// warmup discard. Throws if per-tunnel FIFO order was violated upstream.
inline FctResult compute_fct(const std::vector<DeliveredRecord>& trace,
                             const std::vector<FlowInfo>& flows, SimTime warmup,
                             std::uint64_t class_threshold = 40) {
  std::unordered_map<std::uint64_t, std::uint32_t> index;
  index.reserve(flows.size());
  for (std::uint32_t i = 0; i < flows.size(); ++i) {
    index.emplace(flows[i].flow_id, i);
  }

  struct Accum {
    std::uint64_t delivered = 0;
    SimTime first_egress = 0;
    SimTime last_ingress = 0;
    std::int64_t last_seq_per_tunnel[2] = {-1, -1};
  };
  std::vector<Accum> acc(flows.size());

  for (const auto& rec : trace) {
    auto it = index.find(rec.flow_id);
    if (it == index.end()) {
      throw std::runtime_error("trace references a flow missing from the registry");
    }
    Accum& a = acc[it->second];
    std::int64_t& last_seq = a.last_seq_per_tunnel[rec.tunnel];
    if (static_cast<std::int64_t>(rec.seq) <= last_seq) {
      throw std::runtime_error("per-tunnel FIFO violation in trace");
    }
    last_seq = rec.seq;
    if (rec.seq == 0) {
      a.first_egress = rec.t_splitter_egress;
    }
    a.last_ingress = std::max(a.last_ingress, rec.t_dest_ingress);
    ++a.delivered;
  }

  FctResult result;
  for (std::uint32_t i = 0; i < flows.size(); ++i) {
    const FlowInfo& info = flows[i];
    if (info.kind != FlowKind::App) {
      continue;
    }
    if (info.n_packets == 0 || acc[i].delivered < info.n_packets) {
      ++result.incomplete;
      continue;
    }
    if (acc[i].first_egress < warmup) {
      ++result.warmup_excluded;
      continue;
    }
    FlowStats st;
    st.flow_id = info.flow_id;
    st.kind = info.kind;
    st.n_packets = info.n_packets;
    st.fct = acc[i].last_ingress - acc[i].first_egress;
    st.class_at_end = info.n_packets >= class_threshold ? FlowClass::Long : FlowClass::Short;
    st.packet_delays.assign(info.n_packets, 0);
    result.flows.push_back(std::move(st));
  }

  std::unordered_map<std::uint64_t, FlowStats*> included;
  included.reserve(result.flows.size());
  for (auto& st : result.flows) {
    included.emplace(st.flow_id, &st);
  }
  for (const auto& rec : trace) {
    auto it = included.find(rec.flow_id);
    if (it != included.end()) {
      it->second->packet_delays[rec.seq] = rec.t_dest_ingress - rec.t_splitter_egress;
    }
  }
  return result;
}

// Delay-variation jitter: absolute difference of consecutive packets'
// one-way delays within one flow. Single-packet flows yield no samples.
inline JitterSample compute_jitter(const FlowStats& stats) {
  JitterSample sample;
  sample.flow_id = stats.flow_id;
  if (stats.packet_delays.size() >= 2) {
    sample.values.reserve(stats.packet_delays.size() - 1);
    for (std::size_t i = 0; i + 1 < stats.packet_delays.size(); ++i) {
      sample.values.push_back(std::abs(stats.packet_delays[i + 1] - stats.packet_delays[i]));
    }
  }
  return sample;
}

struct DistSummary {
  std::uint64_t n = 0;
  double mean_us = 0.0;
  double std_us = 0.0;
  double p50_us = 0.0;
  double p90_us = 0.0;
  double p99_us = 0.0;
  double p999_us = 0.0;
  double min_us = 0.0;
  double max_us = 0.0;
};

// Nearest-rank percentile over a sorted sample.
inline double percentile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) {
    return 0.0;
  }
  const auto rank = static_cast<std::size_t>(
      std::max<double>(1.0, std::ceil(q * static_cast<double>(sorted.size()))));
  return sorted[std::min(rank - 1, sorted.size() - 1)];
}

inline DistSummary summarize(std::vector<double> values_us) {
  DistSummary s;
  s.n = values_us.size();
  if (values_us.empty()) {
    return s;
  }
  std::sort(values_us.begin(), values_us.end());
  double sum = 0.0;
  for (double v : values_us) {
    sum += v;
  }
  s.mean_us = sum / static_cast<double>(s.n);
  double var = 0.0;
  for (double v : values_us) {
    var += (v - s.mean_us) * (v - s.mean_us);
  }
  s.std_us = std::sqrt(var / static_cast<double>(s.n));
  s.min_us = values_us.front();
  s.max_us = values_us.back();
  s.p50_us = percentile_sorted(values_us, 0.50);
  s.p90_us = percentile_sorted(values_us, 0.90);
  s.p99_us = percentile_sorted(values_us, 0.99);
  s.p999_us = percentile_sorted(values_us, 0.999);
  return s;
}

struct Histogram {
  double bin_width = 0.0;
  std::int64_t first_bin = 0;                // edge of bin i: (first_bin + i) * bin_width
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;

  double bin_start(std::size_t i) const { return (static_cast<double>(first_bin) + i) * bin_width; }
  double density(std::size_t i) const {
    return static_cast<double>(counts[i]) / (static_cast<double>(total) * bin_width);
  }
};

inline Histogram histogram(const std::vector<double>& samples, double bin_width) {
  if (samples.empty()) {
    throw std::invalid_argument("histogram needs at least one sample");
  }
  if (bin_width <= 0.0) {
    throw std::invalid_argument("histogram bin width must be positive");
  }
  const auto [min_it, max_it] = std::minmax_element(samples.begin(), samples.end());
  Histogram h;
  h.bin_width = bin_width;
  h.first_bin = static_cast<std::int64_t>(std::floor(*min_it / bin_width));
  const auto last_bin = static_cast<std::int64_t>(std::floor(*max_it / bin_width));
  h.counts.assign(static_cast<std::size_t>(last_bin - h.first_bin) + 1, 0);
  for (double s : samples) {
    auto bin = static_cast<std::int64_t>(std::floor(s / bin_width)) - h.first_bin;
    bin = std::clamp<std::int64_t>(bin, 0, static_cast<std::int64_t>(h.counts.size()) - 1);
    ++h.counts[static_cast<std::size_t>(bin)];
  }
  h.total = samples.size();
  return h;
}

}  // namespace flowsim
