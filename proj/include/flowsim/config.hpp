#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "flowsim/report.hpp"
#include "flowsim/routing.hpp"
#include "flowsim/simulation.hpp"
#include "flowsim/workload.hpp"

namespace flowsim {

using json = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Full parameterization of one experiment. Every run is a pure function
// of (config, seed); the JSON form round-trips losslessly.
struct ExperimentConfig {
  // splitter
  std::uint64_t threshold = 40;
  std::uint8_t tos_short = 0x00;
  std::uint8_t tos_long = 0x08;
  double idle_timeout_s = 30.0;
  double eviction_period_s = 1.0;

  // network
  std::int64_t tunnel_capacity_bps = 1'000'000'000;
  std::int64_t tunnel_prop_delay_us = 1000;
  std::uint32_t mtu = 1500;

  // run
  double horizon_s = 120.0;
  double warmup_s = 5.0;
  std::uint64_t seed = 1;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::string baseline_policy = "ecmp_packet";
  std::string treatment_policy = "splitter";
  std::string output_dir = "out";

  // workload
  double flow_rate_per_s = 5.0;
  QueryMix query_mix;
  std::uint32_t packet_size_bytes = 1500;
  std::uint32_t burst_packets = 5120;
  double flow_pace_mbps = 80.0;
  double short_flow_packet_gap_us = 25.0;
  double background_utilization = 0.4;
  std::uint32_t background_message_bytes = 1472;
  std::uint32_t background_streams = 4;
  bool background_bypass = false;

  // report
  std::uint32_t selector_threshold = 40;
  double fct_bin_us = 200.0;
  double jitter_bin_us = 20.0;

  // sweeps
  std::vector<double> utilization_sweep{0.1, 0.2, 0.3, 0.4};
  std::vector<std::uint64_t> threshold_sweep{1, 8, 16, 40};
  std::vector<double> flow_rate_sweep{1.0, 2.0, 5.0};

  void validate() const {
    if (threshold == 0) throw ConfigError("splitter.threshold must be >= 1");
    if (tos_short == tos_long) throw ConfigError("splitter.tos_short and tos_long must differ");
    if (idle_timeout_s <= 0) throw ConfigError("splitter.idle_timeout_s must be positive");
    if (tunnel_capacity_bps <= 0) throw ConfigError("network.capacity_bps must be positive");
    if (tunnel_prop_delay_us < 0) throw ConfigError("network.prop_delay_us must be >= 0");
    if (mtu < kMinPacketBytes) throw ConfigError("network.mtu must be >= 20");
    if (horizon_s <= 0) throw ConfigError("run.horizon_s must be positive");
    if (warmup_s < 0 || warmup_s >= horizon_s) throw ConfigError("run.warmup_s must lie in [0, horizon)");
    if (seeds.empty()) throw ConfigError("run.seeds must not be empty");
    policy_from_name(baseline_policy);
    policy_from_name(treatment_policy);
    if (flow_rate_per_s <= 0) throw ConfigError("workload.flow_rate_per_s must be positive");
    query_mix.validate();
    if (packet_size_bytes < kMinPacketBytes || packet_size_bytes > mtu) {
      throw ConfigError("workload.packet_size_bytes must lie in [20, mtu]");
    }
    if (flow_pace_mbps < 0.0 || short_flow_packet_gap_us < 0.0) {
      throw ConfigError("workload pacing values must be >= 0");
    }
    if (background_utilization < 0.0 || background_utilization > 1.0) {
      throw ConfigError("workload.background.utilization must lie in [0, 1]");
    }
    if (background_utilization > 0.0 && background_streams == 0) {
      throw ConfigError("workload.background.streams must be >= 1");
    }
    if (background_message_bytes + 28 > mtu) {
      throw ConfigError("workload.background.message_bytes + 28 must fit the MTU");
    }
    if (selector_threshold == 0) throw ConfigError("report.selector_threshold must be >= 1");
    if (fct_bin_us <= 0 || jitter_bin_us <= 0) throw ConfigError("report bin widths must be positive");
  }
};

namespace detail {

inline void reject_unknown_keys(const json& obj, const char* section,
                                std::initializer_list<const char*> known) {
  for (const auto& item : obj.items()) {
    bool found = false;
    for (const char* k : known) {
      if (item.key() == k) {
        found = true;
        break;
      }
    }
    if (!found) {
      throw ConfigError(std::string("unknown key '") + section + "." + item.key() + "'");
    }
  }
}

template <typename T>
void maybe(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) {
    out = obj.at(key).get<T>();
  }
}

}  // namespace detail

inline json to_json(const ExperimentConfig& c) {
  json mix = json::array();
  for (const auto& cat : c.query_mix.categories) {
    mix.push_back(json{{"packets", cat.packets}, {"weight", cat.weight}});
  }
  return json{
      {"splitter",
       {{"threshold", c.threshold},
        {"tos_short", c.tos_short},
        {"tos_long", c.tos_long},
        {"idle_timeout_s", c.idle_timeout_s},
        {"eviction_period_s", c.eviction_period_s}}},
      {"network",
       {{"capacity_bps", c.tunnel_capacity_bps},
        {"prop_delay_us", c.tunnel_prop_delay_us},
        {"mtu", c.mtu}}},
      {"run",
       {{"horizon_s", c.horizon_s},
        {"warmup_s", c.warmup_s},
        {"seed", c.seed},
        {"seeds", c.seeds},
        {"baseline", c.baseline_policy},
        {"treatment", c.treatment_policy},
        {"output_dir", c.output_dir}}},
      {"workload",
       {{"flow_rate_per_s", c.flow_rate_per_s},
        {"query_mix", mix},
        {"packet_size_bytes", c.packet_size_bytes},
        {"burst_packets", c.burst_packets},
        {"flow_pace_mbps", c.flow_pace_mbps},
        {"short_flow_packet_gap_us", c.short_flow_packet_gap_us},
        {"background",
         {{"utilization", c.background_utilization},
          {"message_bytes", c.background_message_bytes},
          {"streams", c.background_streams},
          {"bypass", c.background_bypass}}}}},
      {"report",
       {{"selector_threshold", c.selector_threshold},
        {"fct_bin_us", c.fct_bin_us},
        {"jitter_bin_us", c.jitter_bin_us}}},
      {"sweeps",
       {{"utilization", c.utilization_sweep},
        {"threshold", c.threshold_sweep},
        {"flow_rate", c.flow_rate_sweep}}}};
}

inline ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  detail::reject_unknown_keys(j, "",
                              {"splitter", "network", "run", "workload", "report", "sweeps"});
  if (j.contains("splitter")) {
    const json& s = j.at("splitter");
    detail::reject_unknown_keys(s, "splitter",
                                {"threshold", "tos_short", "tos_long", "idle_timeout_s",
                                 "eviction_period_s"});
    detail::maybe(s, "threshold", c.threshold);
    detail::maybe(s, "tos_short", c.tos_short);
    detail::maybe(s, "tos_long", c.tos_long);
    detail::maybe(s, "idle_timeout_s", c.idle_timeout_s);
    detail::maybe(s, "eviction_period_s", c.eviction_period_s);
  }
  if (j.contains("network")) {
    const json& n = j.at("network");
    detail::reject_unknown_keys(n, "network", {"capacity_bps", "prop_delay_us", "mtu"});
    detail::maybe(n, "capacity_bps", c.tunnel_capacity_bps);
    detail::maybe(n, "prop_delay_us", c.tunnel_prop_delay_us);
    detail::maybe(n, "mtu", c.mtu);
  }
  if (j.contains("run")) {
    const json& r = j.at("run");
    detail::reject_unknown_keys(
        r, "run", {"horizon_s", "warmup_s", "seed", "seeds", "baseline", "treatment", "output_dir"});
    detail::maybe(r, "horizon_s", c.horizon_s);
    detail::maybe(r, "warmup_s", c.warmup_s);
    detail::maybe(r, "seed", c.seed);
    detail::maybe(r, "seeds", c.seeds);
    detail::maybe(r, "baseline", c.baseline_policy);
    detail::maybe(r, "treatment", c.treatment_policy);
    detail::maybe(r, "output_dir", c.output_dir);
  }
  if (j.contains("workload")) {
    const json& w = j.at("workload");
    detail::reject_unknown_keys(w, "workload",
                                {"flow_rate_per_s", "query_mix", "packet_size_bytes",
                                 "burst_packets", "flow_pace_mbps",
                                 "short_flow_packet_gap_us", "background"});
    detail::maybe(w, "flow_rate_per_s", c.flow_rate_per_s);
    if (w.contains("query_mix")) {
      c.query_mix.categories.clear();
      for (const auto& cat : w.at("query_mix")) {
        detail::reject_unknown_keys(cat, "workload.query_mix[]", {"packets", "weight"});
        c.query_mix.categories.push_back(
            QueryCategory{cat.at("packets").get<std::uint32_t>(), cat.at("weight").get<double>()});
      }
    }
    detail::maybe(w, "packet_size_bytes", c.packet_size_bytes);
    detail::maybe(w, "burst_packets", c.burst_packets);
    detail::maybe(w, "flow_pace_mbps", c.flow_pace_mbps);
    detail::maybe(w, "short_flow_packet_gap_us", c.short_flow_packet_gap_us);
    if (w.contains("background")) {
      const json& b = w.at("background");
      detail::reject_unknown_keys(b, "workload.background",
                                  {"utilization", "message_bytes", "streams", "bypass"});
      detail::maybe(b, "utilization", c.background_utilization);
      detail::maybe(b, "message_bytes", c.background_message_bytes);
      detail::maybe(b, "streams", c.background_streams);
      detail::maybe(b, "bypass", c.background_bypass);
    }
  }
  if (j.contains("report")) {
    const json& r = j.at("report");
    detail::reject_unknown_keys(r, "report", {"selector_threshold", "fct_bin_us", "jitter_bin_us"});
    detail::maybe(r, "selector_threshold", c.selector_threshold);
    detail::maybe(r, "fct_bin_us", c.fct_bin_us);
    detail::maybe(r, "jitter_bin_us", c.jitter_bin_us);
  }
  if (j.contains("sweeps")) {
    const json& s = j.at("sweeps");
    detail::reject_unknown_keys(s, "sweeps", {"utilization", "threshold", "flow_rate"});
    detail::maybe(s, "utilization", c.utilization_sweep);
    detail::maybe(s, "threshold", c.threshold_sweep);
    detail::maybe(s, "flow_rate", c.flow_rate_sweep);
  }
  c.validate();
  return c;
}

// Maps a byte offset from a json parse error to a 1-based line number.
inline std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
    }
  }
  return line;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ":" + std::to_string(line_of_offset(text, e.byte)) +
                      ": " + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

inline void save_config(const ExperimentConfig& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw ConfigError("cannot write config file: " + path);
  }
  out << to_json(c).dump(2) << "\n";
}

}  // namespace flowsim
