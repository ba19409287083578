#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "flowsim/metrics.hpp"

namespace flowsim {

struct TunnelReport {
  std::uint64_t pkts = 0;
  std::uint64_t bytes = 0;
  std::uint64_t max_queue_depth = 0;
};

struct ClassReport {
  std::uint64_t flows = 0;
  std::uint64_t packets = 0;
  DistSummary fct;
  DistSummary jitter;
  Histogram fct_hist;
  Histogram jitter_hist;
};

// Everything one simulation run reports. Pure data; serialization lives
// in report_io.hpp. Summaries cover complete app flows whose first packet
// departed after the warmup cutoff, split short/long by packet count
// against `selector_threshold` so that marking-free baselines stay
// comparable.
struct RunReport {
  std::string policy;
  std::uint64_t seed = 0;
  std::uint32_t selector_threshold = 40;
  double horizon_s = 0.0;
  double warmup_s = 0.0;

  std::uint64_t injected = 0;
  std::uint64_t delivered = 0;
  std::uint64_t in_flight = 0;
  std::uint64_t malformed = 0;
  std::uint64_t unknown_tos = 0;
  std::uint64_t evicted_flows = 0;
  std::uint64_t app_flows_total = 0;
  std::uint64_t incomplete_flows = 0;
  std::uint64_t warmup_excluded_flows = 0;

  double offered_app_pps = 0.0;    // application packets offered / horizon
  double offered_total_pps = 0.0;  // all packets injected / horizon
  double delivered_pps = 0.0;

  std::vector<TunnelReport> tunnels;
  ClassReport short_flows;
  ClassReport long_flows;
  std::uint64_t trace_hash = 0;
};

// Order-insensitive 64-bit digest of the delivered-packet trace.
// (Records are mixed in delivery order, which is itself deterministic.)
inline std::uint64_t hash_trace(const std::vector<DeliveredRecord>& trace) {
  auto mix = [](std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    return h;
  };
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& r : trace) {
    h = mix(h, r.flow_id);
    h = mix(h, (static_cast<std::uint64_t>(r.seq) << 16) | (static_cast<std::uint64_t>(r.tunnel) << 8) | r.tos);
    h = mix(h, static_cast<std::uint64_t>(r.t_created));
    h = mix(h, static_cast<std::uint64_t>(r.t_splitter_egress));
    h = mix(h, static_cast<std::uint64_t>(r.t_dest_ingress));
  }
  return h;
}

struct ReportOptions {
  SimTime warmup = from_sec(5.0);
  SimTime horizon = from_sec(120.0);
  std::uint32_t selector_threshold = 40;
  double fct_bin_us = 200.0;
  double jitter_bin_us = 20.0;
};

inline ClassReport build_class_report(const std::vector<const FlowStats*>& flows,
                                      const ReportOptions& opt) {
  ClassReport rep;
  rep.flows = flows.size();
  std::vector<double> fct_us;
  std::vector<double> jitter_us;
  fct_us.reserve(flows.size());
  for (const FlowStats* st : flows) {
    rep.packets += st->n_packets;
    fct_us.push_back(to_us(st->fct));
    JitterSample js = compute_jitter(*st);
    for (SimTime v : js.values) {
      jitter_us.push_back(to_us(v));
    }
  }
  if (!fct_us.empty()) {
    rep.fct_hist = histogram(fct_us, opt.fct_bin_us);
  }
  if (!jitter_us.empty()) {
    rep.jitter_hist = histogram(jitter_us, opt.jitter_bin_us);
  }
  rep.fct = summarize(std::move(fct_us));
  rep.jitter = summarize(std::move(jitter_us));
  return rep;
}

// Assembles the full report for one finished simulation.
inline RunReport build_report(const Simulation& sim, const std::vector<DeliveredRecord>& trace,
                              const ReportOptions& opt, std::uint64_t seed) {
  const WorkloadPlan& plan = sim.plan();
  const auto flows = flow_registry(plan);
  FctResult fct = compute_fct(trace, flows, opt.warmup, opt.selector_threshold);

  RunReport rep;
  rep.policy = policy_name(sim.config().policy);
  rep.seed = seed;
  rep.selector_threshold = opt.selector_threshold;
  rep.horizon_s = to_sec(opt.horizon);
  rep.warmup_s = to_sec(opt.warmup);
  rep.injected = sim.injected_packets();
  rep.delivered = sim.delivered_packets();
  rep.in_flight = sim.in_flight_packets();
  rep.malformed = sim.malformed_packets();
  rep.unknown_tos = sim.unknown_tos_packets();
  rep.evicted_flows = sim.evicted_flows();
  rep.app_flows_total = plan.app_flows.size();
  rep.incomplete_flows = fct.incomplete;
  rep.warmup_excluded_flows = fct.warmup_excluded;

  std::uint64_t app_packets = 0;
  for (const auto& f : plan.app_flows) {
    app_packets += f.n_packets;
  }
  const double horizon_s = to_sec(opt.horizon);
  rep.offered_app_pps = static_cast<double>(app_packets) / horizon_s;
  rep.offered_total_pps = static_cast<double>(rep.injected) / horizon_s;
  rep.delivered_pps = static_cast<double>(rep.delivered) / horizon_s;

  for (int i = 0; i < Simulation::kTunnels; ++i) {
    const Tunnel& t = sim.tunnel(i);
    rep.tunnels.push_back(TunnelReport{t.pkts_sent(), t.bytes_sent(), t.max_queue_depth()});
  }

  std::vector<const FlowStats*> shorts;
  std::vector<const FlowStats*> longs;
  for (const auto& st : fct.flows) {
    (st.n_packets < opt.selector_threshold ? shorts : longs).push_back(&st);
  }
  rep.short_flows = build_class_report(shorts, opt);
  rep.long_flows = build_class_report(longs, opt);
  rep.trace_hash = hash_trace(trace);
  return rep;
}

enum class FlowSelector : std::uint8_t { Short, Long };

struct SpeedupResult {
  double mean_ratio = 0.0;  // baseline mean FCT / treatment mean FCT
  double p99_ratio = 0.0;
  double baseline_mean_us = 0.0;
  double treatment_mean_us = 0.0;
  std::uint64_t baseline_flows = 0;
  std::uint64_t treatment_flows = 0;
};

// FCT acceleration of `treatment` relative to `baseline` for one flow
// class. Both reports must come from seed-matched runs.
inline SpeedupResult speedup(const RunReport& baseline, const RunReport& treatment,
                             FlowSelector selector) {
  const ClassReport& b =
      selector == FlowSelector::Short ? baseline.short_flows : baseline.long_flows;
  const ClassReport& t =
      selector == FlowSelector::Short ? treatment.short_flows : treatment.long_flows;
  if (b.flows == 0 || t.flows == 0) {
    throw std::invalid_argument("speedup selector matches no flows");
  }
  SpeedupResult r;
  r.baseline_mean_us = b.fct.mean_us;
  r.treatment_mean_us = t.fct.mean_us;
  r.mean_ratio = b.fct.mean_us / t.fct.mean_us;
  r.p99_ratio = b.fct.p99_us / t.fct.p99_us;
  r.baseline_flows = b.flows;
  r.treatment_flows = t.flows;
  return r;
}

}  // namespace flowsim
