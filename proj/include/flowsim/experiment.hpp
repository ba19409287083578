#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flowsim/config.hpp"
#include "flowsim/report.hpp"
#include "flowsim/simulation.hpp"

namespace flowsim {

inline SimConfig sim_config_for(const ExperimentConfig& c, RoutingPolicy policy) {
  SimConfig sc;
  sc.tunnel_capacity_bps = c.tunnel_capacity_bps;
  sc.tunnel_prop_delay = from_us(c.tunnel_prop_delay_us);
  sc.mtu = c.mtu;
  sc.policy = policy;
  sc.threshold = c.threshold;
  sc.idle_timeout = from_sec(c.idle_timeout_s);
  sc.eviction_period = from_sec(c.eviction_period_s);
  sc.marks = TosMarks{c.tos_short, c.tos_long};
  return sc;
}

inline WorkloadConfig workload_config_for(const ExperimentConfig& c, std::uint64_t seed) {
  WorkloadConfig wc;
  wc.flow_rate_per_s = c.flow_rate_per_s;
  wc.mix = c.query_mix;
  wc.packet_size_bytes = c.packet_size_bytes;
  wc.burst_packets = c.burst_packets;
  wc.flow_pace_bps = c.flow_pace_mbps * 1e6;
  wc.short_packet_gap_us = c.short_flow_packet_gap_us;
  wc.background.utilization = c.background_utilization;
  wc.background.message_bytes = c.background_message_bytes;
  wc.background.streams = c.background_streams;
  wc.background.bypass = c.background_bypass;
  wc.combined_capacity_bps = 2 * c.tunnel_capacity_bps;
  wc.horizon = from_sec(c.horizon_s);
  wc.seed = seed;
  return wc;
}

inline ReportOptions report_options_for(const ExperimentConfig& c) {
  ReportOptions opt;
  opt.warmup = from_sec(c.warmup_s);
  opt.horizon = from_sec(c.horizon_s);
  opt.selector_threshold = c.selector_threshold;
  opt.fct_bin_us = c.fct_bin_us;
  opt.jitter_bin_us = c.jitter_bin_us;
  return opt;
}

struct RunArtifacts {
  RunReport report;
  std::vector<DeliveredRecord> trace;  // empty unless keep_trace was requested
};

// One simulation at full length: build the seeded workload, run to the
// horizon, fold the trace into a report.
inline RunArtifacts run_single(const ExperimentConfig& c, RoutingPolicy policy,
                               std::uint64_t seed, bool keep_trace = false) {
  Simulation sim(sim_config_for(c, policy));
  sim.attach_workload(WorkloadPlan::build(workload_config_for(c, seed)));
  sim.run_until(from_sec(c.horizon_s));

  RunArtifacts out;
  out.report = build_report(sim, sim.trace(), report_options_for(c), seed);
  if (keep_trace) {
    out.trace = sim.take_trace();
  }
  return out;
}

struct ExperimentResult {
  RunReport baseline;
  RunReport treatment;
  SpeedupResult short_speedup;
  SpeedupResult long_speedup;
};

// Seed-matched policy pair: both runs share the workload RNG stream, only
// the routing policy differs.
inline ExperimentResult run_experiment_pair(const ExperimentConfig& c, std::uint64_t seed) {
  ExperimentResult res;
  res.baseline = run_single(c, policy_from_name(c.baseline_policy), seed).report;
  res.treatment = run_single(c, policy_from_name(c.treatment_policy), seed).report;
  res.short_speedup = speedup(res.baseline, res.treatment, FlowSelector::Short);
  res.long_speedup = speedup(res.baseline, res.treatment, FlowSelector::Long);
  return res;
}

enum class SweepAxis : std::uint8_t { Utilization, Threshold, FlowRate };

inline SweepAxis sweep_axis_from_name(const std::string& name) {
  if (name == "utilization") return SweepAxis::Utilization;
  if (name == "threshold") return SweepAxis::Threshold;
  if (name == "pps" || name == "flow_rate") return SweepAxis::FlowRate;
  throw ConfigError("unknown sweep axis: " + name);
}

inline std::string sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Utilization: return "utilization";
    case SweepAxis::Threshold: return "threshold";
    case SweepAxis::FlowRate: return "flow_rate";
  }
  return "?";
}

struct SweepRow {
  double axis_value = 0.0;
  double offered_app_pps = 0.0;
  double speedup_short_mean = 0.0;  // averaged over seeds
  double speedup_short_min = 0.0;   // worst seed
  double speedup_short_p99 = 0.0;
  double speedup_long_mean = 0.0;
  double jitter_mean_baseline_us = 0.0;
  double jitter_mean_treatment_us = 0.0;
  double jitter_std_baseline_us = 0.0;
  double jitter_std_treatment_us = 0.0;
  std::uint64_t short_flows = 0;
};

inline ExperimentConfig with_axis_value(ExperimentConfig c, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::Utilization:
      c.background_utilization = value;
      break;
    case SweepAxis::Threshold:
      c.threshold = static_cast<std::uint64_t>(value);
      break;
    case SweepAxis::FlowRate:
      c.flow_rate_per_s = value;
      break;
  }
  return c;
}

inline std::vector<double> sweep_values(const ExperimentConfig& c, SweepAxis axis) {
  std::vector<double> values;
  switch (axis) {
    case SweepAxis::Utilization:
      values = c.utilization_sweep;
      break;
    case SweepAxis::Threshold:
      for (auto t : c.threshold_sweep) {
        values.push_back(static_cast<double>(t));
      }
      break;
    case SweepAxis::FlowRate:
      values = c.flow_rate_sweep;
      break;
  }
  if (values.empty()) {
    throw ConfigError("sweep axis has no values configured");
  }
  return values;
}

// One row per axis value; speedups averaged over the configured seeds.
// Baseline runs do not depend on the splitter threshold, so the threshold
// axis reuses one baseline per seed.
inline std::vector<SweepRow> sweep(const ExperimentConfig& base, SweepAxis axis,
                                   const std::vector<double>& values) {
  std::vector<SweepRow> rows;
  std::vector<RunReport> cached_baselines;
  const bool baseline_invariant = axis == SweepAxis::Threshold;
  if (baseline_invariant) {
    for (std::uint64_t seed : base.seeds) {
      cached_baselines.push_back(
          run_single(base, policy_from_name(base.baseline_policy), seed).report);
    }
  }

  for (double v : values) {
    const ExperimentConfig c = with_axis_value(base, axis, v);
    SweepRow row;
    row.axis_value = v;
    row.speedup_short_min = 0.0;
    double sum_short = 0.0, sum_short_p99 = 0.0, sum_long = 0.0;
    double jm_b = 0.0, jm_t = 0.0, js_b = 0.0, js_t = 0.0;
    double min_short = 0.0;
    for (std::size_t i = 0; i < c.seeds.size(); ++i) {
      const std::uint64_t seed = c.seeds[i];
      const RunReport baseline =
          baseline_invariant ? cached_baselines[i]
                             : run_single(c, policy_from_name(c.baseline_policy), seed).report;
      const RunReport treatment =
          run_single(c, policy_from_name(c.treatment_policy), seed).report;
      const SpeedupResult s = speedup(baseline, treatment, FlowSelector::Short);
      const SpeedupResult l = speedup(baseline, treatment, FlowSelector::Long);
      sum_short += s.mean_ratio;
      sum_short_p99 += s.p99_ratio;
      sum_long += l.mean_ratio;
      jm_b += baseline.short_flows.jitter.mean_us;
      jm_t += treatment.short_flows.jitter.mean_us;
      js_b += baseline.short_flows.jitter.std_us;
      js_t += treatment.short_flows.jitter.std_us;
      min_short = i == 0 ? s.mean_ratio : std::min(min_short, s.mean_ratio);
      row.short_flows += treatment.short_flows.flows;
      row.offered_app_pps += treatment.offered_app_pps;
    }
    const auto n = static_cast<double>(c.seeds.size());
    row.speedup_short_mean = sum_short / n;
    row.speedup_short_p99 = sum_short_p99 / n;
    row.speedup_long_mean = sum_long / n;
    row.speedup_short_min = min_short;
    row.jitter_mean_baseline_us = jm_b / n;
    row.jitter_mean_treatment_us = jm_t / n;
    row.jitter_std_baseline_us = js_b / n;
    row.jitter_std_treatment_us = js_t / n;
    row.offered_app_pps /= n;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace flowsim
