#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "flowsim/config.hpp"
#include "flowsim/experiment.hpp"
#include "flowsim/metrics.hpp"
#include "flowsim/report.hpp"

namespace flowsim {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open for writing: " + path);
  }
  out << content;
  if (!out) {
    throw IoError("write failed: " + path);
  }
}

// Timestamps are nanosecond-exact microseconds, printed with three
// decimals so the CSV loses nothing.
inline void append_us(std::string& out, SimTime t) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%lld.%03lld",
                static_cast<long long>(t / 1000), static_cast<long long>(t % 1000));
  out += buf;
}

constexpr const char* kTraceCsvHeader =
    "flow_id,seq,tunnel,t_created_us,t_splitter_egress_us,t_dest_ingress_us,tos\n";

inline std::string trace_to_csv(const std::vector<DeliveredRecord>& trace) {
  std::string out = kTraceCsvHeader;
  out.reserve(out.size() + trace.size() * 48);
  char buf[64];
  for (const auto& r : trace) {
    std::snprintf(buf, sizeof(buf), "%llu,%u,%u,", static_cast<unsigned long long>(r.flow_id),
                  r.seq, r.tunnel);
    out += buf;
    append_us(out, r.t_created);
    out += ',';
    append_us(out, r.t_splitter_egress);
    out += ',';
    append_us(out, r.t_dest_ingress);
    std::snprintf(buf, sizeof(buf), ",%u\n", r.tos);
    out += buf;
  }
  return out;
}

inline json summary_to_json(const DistSummary& s) {
  return json{{"n", s.n},         {"mean_us", s.mean_us}, {"std_us", s.std_us},
              {"p50_us", s.p50_us}, {"p90_us", s.p90_us},   {"p99_us", s.p99_us},
              {"p999_us", s.p999_us}, {"min_us", s.min_us}, {"max_us", s.max_us}};
}

inline json histogram_to_json(const Histogram& h) {
  json bins = json::array();
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    if (h.counts[i] > 0) {
      bins.push_back(json{{"start_us", h.bin_start(i)}, {"density", h.density(i)}});
    }
  }
  return json{{"bin_width_us", h.bin_width}, {"bins", bins}};
}

inline json class_report_to_json(const ClassReport& c) {
  return json{{"flows", c.flows},
              {"packets", c.packets},
              {"fct", summary_to_json(c.fct)},
              {"jitter", summary_to_json(c.jitter)},
              {"fct_hist", histogram_to_json(c.fct_hist)},
              {"jitter_hist", histogram_to_json(c.jitter_hist)}};
}

inline json report_to_json(const RunReport& r) {
  json tunnels = json::array();
  for (const auto& t : r.tunnels) {
    tunnels.push_back(
        json{{"pkts", t.pkts}, {"bytes", t.bytes}, {"max_queue_depth", t.max_queue_depth}});
  }
  return json{{"policy", r.policy},
              {"seed", r.seed},
              {"selector_threshold", r.selector_threshold},
              {"horizon_s", r.horizon_s},
              {"warmup_s", r.warmup_s},
              {"packets",
               {{"injected", r.injected},
                {"delivered", r.delivered},
                {"in_flight", r.in_flight},
                {"malformed", r.malformed},
                {"unknown_tos", r.unknown_tos}}},
              {"flows",
               {{"app_total", r.app_flows_total},
                {"incomplete", r.incomplete_flows},
                {"warmup_excluded", r.warmup_excluded_flows},
                {"evicted_table_entries", r.evicted_flows}}},
              {"rates_pps",
               {{"offered_app", r.offered_app_pps},
                {"offered_total", r.offered_total_pps},
                {"delivered", r.delivered_pps}}},
              {"tunnels", tunnels},
              {"short_flows", class_report_to_json(r.short_flows)},
              {"long_flows", class_report_to_json(r.long_flows)},
              {"trace_hash", r.trace_hash}};
}

inline json speedup_to_json(const SpeedupResult& s) {
  return json{{"mean_ratio", s.mean_ratio},
              {"p99_ratio", s.p99_ratio},
              {"baseline_mean_us", s.baseline_mean_us},
              {"treatment_mean_us", s.treatment_mean_us},
              {"baseline_flows", s.baseline_flows},
              {"treatment_flows", s.treatment_flows}};
}

inline json experiment_to_json(const ExperimentConfig& c, const ExperimentResult& r) {
  return json{{"config", to_json(c)},
              {"baseline", report_to_json(r.baseline)},
              {"treatment", report_to_json(r.treatment)},
              {"speedup",
               {{"short_flows", speedup_to_json(r.short_speedup)},
                {"long_flows", speedup_to_json(r.long_speedup)}}}};
}

// Aligned-column rendering of one run report, the human counterpart of
// report_to_json.
inline std::string report_to_text(const RunReport& r) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "policy %-12s seed %-6llu horizon %.0f s  warmup %.1f s\n",
                r.policy.c_str(), static_cast<unsigned long long>(r.seed), r.horizon_s,
                r.warmup_s);
  out += buf;
  std::snprintf(buf, sizeof(buf),
                "packets  injected %-11llu delivered %-11llu in-flight %-8llu malformed %llu  "
                "unknown-tos %llu\n",
                static_cast<unsigned long long>(r.injected),
                static_cast<unsigned long long>(r.delivered),
                static_cast<unsigned long long>(r.in_flight),
                static_cast<unsigned long long>(r.malformed),
                static_cast<unsigned long long>(r.unknown_tos));
  out += buf;
  std::snprintf(buf, sizeof(buf),
                "flows    app %-8llu measured %llu short / %llu long  incomplete %llu  "
                "warmup-excluded %llu  evictions %llu\n",
                static_cast<unsigned long long>(r.app_flows_total),
                static_cast<unsigned long long>(r.short_flows.flows),
                static_cast<unsigned long long>(r.long_flows.flows),
                static_cast<unsigned long long>(r.incomplete_flows),
                static_cast<unsigned long long>(r.warmup_excluded_flows),
                static_cast<unsigned long long>(r.evicted_flows));
  out += buf;
  std::snprintf(buf, sizeof(buf),
                "rates    offered-app %.1f pps  offered-total %.1f pps  delivered %.1f pps\n",
                r.offered_app_pps, r.offered_total_pps, r.delivered_pps);
  out += buf;
  for (std::size_t i = 0; i < r.tunnels.size(); ++i) {
    std::snprintf(buf, sizeof(buf),
                  "tunnel %zu pkts %-12llu bytes %-15llu max queue depth %llu\n", i,
                  static_cast<unsigned long long>(r.tunnels[i].pkts),
                  static_cast<unsigned long long>(r.tunnels[i].bytes),
                  static_cast<unsigned long long>(r.tunnels[i].max_queue_depth));
    out += buf;
  }
  out += "\nclass   metric        n       mean        std        p50        p90        p99"
         "      p99.9        min        max  (us)\n";
  const auto row = [&out, &buf](const char* cls, const char* metric, const DistSummary& s) {
    std::snprintf(buf, sizeof(buf),
                  "%-7s %-6s %9llu %10.1f %10.1f %10.1f %10.1f %10.1f %10.1f %10.1f %10.1f\n",
                  cls, metric, static_cast<unsigned long long>(s.n), s.mean_us, s.std_us,
                  s.p50_us, s.p90_us, s.p99_us, s.p999_us, s.min_us, s.max_us);
    out += buf;
  };
  row("short", "fct", r.short_flows.fct);
  row("short", "jitter", r.short_flows.jitter);
  row("long", "fct", r.long_flows.fct);
  row("long", "jitter", r.long_flows.jitter);
  std::snprintf(buf, sizeof(buf), "\ntrace hash %016llx\n",
                static_cast<unsigned long long>(r.trace_hash));
  out += buf;
  return out;
}

constexpr const char* kSweepCsvHeader =
    "axis,value,offered_app_pps,speedup_short_mean,speedup_short_min,speedup_short_p99,"
    "speedup_long_mean,jitter_mean_baseline_us,jitter_mean_treatment_us,"
    "jitter_std_baseline_us,jitter_std_treatment_us,short_flows\n";

inline std::string sweep_to_csv(SweepAxis axis, const std::vector<SweepRow>& rows) {
  std::string out = kSweepCsvHeader;
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%llu\n",
                  sweep_axis_name(axis).c_str(), r.axis_value, r.offered_app_pps,
                  r.speedup_short_mean, r.speedup_short_min, r.speedup_short_p99,
                  r.speedup_long_mean, r.jitter_mean_baseline_us, r.jitter_mean_treatment_us,
                  r.jitter_std_baseline_us, r.jitter_std_treatment_us,
                  static_cast<unsigned long long>(r.short_flows));
    out += buf;
  }
  return out;
}

inline std::string histogram_to_csv(const Histogram& h) {
  std::string out = "bin_start_us,bin_end_us,density\n";
  char buf[128];
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    if (h.counts[i] == 0) {
      continue;
    }
    std::snprintf(buf, sizeof(buf), "%.6g,%.6g,%.9g\n", h.bin_start(i),
                  h.bin_start(i) + h.bin_width, h.density(i));
    out += buf;
  }
  return out;
}

inline std::string workload_to_csv(const WorkloadPlan& plan) {
  std::string out =
      "flow_id,kind,n_packets,packet_size_bytes,start_us,burst_packets,burst_interval_us,"
      "src_addr,dst_addr,src_port,dst_port,protocol\n";
  char buf[256];
  for (const auto& s : plan.bg_streams) {
    std::snprintf(buf, sizeof(buf), "%llu,background,0,%u,0.000,0,0.000,%u,%u,%u,%u,%u\n",
                  static_cast<unsigned long long>(s.flow_id), s.wire_bytes, s.tuple.src_addr,
                  s.tuple.dst_addr, s.tuple.src_port, s.tuple.dst_port, s.tuple.protocol);
    out += buf;
  }
  for (const auto& f : plan.app_flows) {
    std::snprintf(buf, sizeof(buf), "%llu,app,%u,%u,", static_cast<unsigned long long>(f.flow_id),
                  f.n_packets, f.packet_size_bytes);
    out += buf;
    append_us(out, f.start_time);
    std::snprintf(buf, sizeof(buf), ",%u,", f.burst_packets);
    out += buf;
    append_us(out, f.burst_interval);
    std::snprintf(buf, sizeof(buf), ",%u,%u,%u,%u,%u\n", f.tuple.src_addr, f.tuple.dst_addr,
                  f.tuple.src_port, f.tuple.dst_port, f.tuple.protocol);
    out += buf;
  }
  return out;
}

inline void ensure_dir(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) {
    throw IoError("cannot create output directory: " + path + " (" + ec.message() + ")");
  }
}

}  // namespace flowsim
