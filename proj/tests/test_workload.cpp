#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>

#include "flowsim/rng.hpp"
#include "flowsim/simulation.hpp"
#include "flowsim/workload.hpp"

using namespace flowsim;

TEST_CASE("Poisson arrival count lands within 3 sigma of rate * horizon") {
  Rng rng(1234);
  const double rate = 1000.0;
  const auto arrivals = sample_flow_arrivals(rate, from_sec(120.0), rng);
  const double mean = rate * 120.0;
  const double sigma = std::sqrt(mean);
  REQUIRE(std::abs(static_cast<double>(arrivals.size()) - mean) <= 3.0 * sigma);
  REQUIRE(std::is_sorted(arrivals.begin(), arrivals.end()));
}

TEST_CASE("zero horizon yields no arrivals; bad rate throws") {
  Rng rng(1);
  REQUIRE(sample_flow_arrivals(100.0, 0, rng).empty());
  REQUIRE_THROWS_AS(sample_flow_arrivals(0.0, from_sec(1.0), rng), std::invalid_argument);
  REQUIRE_THROWS_AS(sample_flow_arrivals(-3.0, from_sec(1.0), rng), std::invalid_argument);
}

TEST_CASE("fixed seed reproduces the arrival vector exactly") {
  Rng a(5150);
  Rng b(5150);
  REQUIRE(sample_flow_arrivals(500.0, from_sec(10.0), a) ==
          sample_flow_arrivals(500.0, from_sec(10.0), b));
}

TEST_CASE("inter-arrival gaps pass a KS test against the exponential law") {
  Rng rng(987);
  const double rate = 2000.0;
  const auto arrivals = sample_flow_arrivals(rate, from_sec(10.0), rng);
  REQUIRE(arrivals.size() >= 10'000);
  std::vector<double> gaps;
  gaps.reserve(arrivals.size());
  SimTime prev = 0;
  for (SimTime t : arrivals) {
    gaps.push_back(to_sec(t - prev));
    prev = t;
  }
  std::sort(gaps.begin(), gaps.end());
  double d = 0.0;
  const auto n = static_cast<double>(gaps.size());
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    const double f = 1.0 - std::exp(-rate * gaps[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
  }
  const double critical_1pct = 1.628 / std::sqrt(n);
  REQUIRE(d < critical_1pct);
}

TEST_CASE("degenerate single-category mix always samples that size") {
  QueryMix mix;
  mix.categories = {{5, 1.0}};
  Rng rng(3);
  TupleAllocator tuples;
  for (int i = 0; i < 50; ++i) {
    REQUIRE(sample_query(mix, rng, tuples).n_packets == 5);
  }
}

TEST_CASE("query sampling matches category weights within 1% absolute") {
  QueryMix mix;  // default categories
  Rng rng(42);
  TupleAllocator tuples;
  std::map<std::uint32_t, std::uint64_t> counts;
  const int n = 100'000;
  for (int i = 0; i < n; ++i) {
    ++counts[sample_query(mix, rng, tuples).n_packets];
  }
  for (const auto& cat : mix.categories) {
    const double freq = static_cast<double>(counts[cat.packets]) / n;
    REQUIRE(std::abs(freq - cat.weight) < 0.01);
  }
}

TEST_CASE("sampled queries get distinct 5-tuples") {
  QueryMix mix;
  Rng rng(7);
  TupleAllocator tuples;
  FlowSpec a = sample_query(mix, rng, tuples);
  FlowSpec b = sample_query(mix, rng, tuples);
  REQUIRE_FALSE(a.tuple == b.tuple);
}

TEST_CASE("empty mix is rejected") {
  QueryMix mix;
  mix.categories.clear();
  Rng rng(1);
  TupleAllocator tuples;
  REQUIRE_THROWS_AS(sample_query(mix, rng, tuples), std::invalid_argument);
}

namespace {

// Background offered rate measured by running the injection machinery.
double measured_background_rate_bps(double utilization, double seconds, std::uint64_t seed) {
  WorkloadConfig wc;
  wc.flow_rate_per_s = 0.001;  // essentially no app traffic
  wc.mix.categories = {{1, 1.0}};
  wc.background.utilization = utilization;
  wc.horizon = from_sec(seconds);
  wc.seed = seed;
  SimConfig sc;
  sc.policy = RoutingPolicy::EcmpPerPacket;
  Simulation sim(sc);
  sim.attach_workload(WorkloadPlan::build(wc));
  sim.run_until(wc.horizon);
  double bg_bytes = 0.0;
  for (const auto& rec : sim.trace()) {
    if (rec.flow_id < kAppFlowIdBase) {
      bg_bytes += 1500.0;
    }
  }
  return bg_bytes * 8.0 / seconds;
}

}  // namespace

TEST_CASE("background stream hits the configured utilization within 2%") {
  const double rate = measured_background_rate_bps(0.4, 115.0, 11);
  const double target = 0.4 * 2e9;  // 66,667 pps of 1500 B on-wire messages
  REQUIRE(std::abs(rate - target) / target < 0.02);
}

TEST_CASE("background load scales linearly with utilization") {
  const double r1 = measured_background_rate_bps(0.1, 40.0, 11);
  const double r4 = measured_background_rate_bps(0.4, 40.0, 11);
  REQUIRE(std::abs(r4 / r1 - 4.0) < 0.08);  // x4 within 2%
}

TEST_CASE("zero utilization produces no background packets") {
  WorkloadConfig wc;
  wc.background.utilization = 0.0;
  wc.horizon = from_sec(2.0);
  const WorkloadPlan plan = WorkloadPlan::build(wc);
  REQUIRE(plan.bg_streams.empty());
}

TEST_CASE("utilization above 1 is rejected") {
  WorkloadConfig wc;
  wc.background.utilization = 1.2;
  REQUIRE_THROWS_AS(WorkloadPlan::build(wc), std::invalid_argument);
}

TEST_CASE("background flows cross any threshold <= 64 well before warmup ends") {
  WorkloadConfig wc;
  wc.background.utilization = 0.1;  // weakest acceptance setting
  wc.horizon = from_sec(5.0);
  wc.flow_rate_per_s = 0.001;
  wc.mix.categories = {{1, 1.0}};
  SimConfig sc;
  sc.threshold = 64;
  Simulation sim(sc);
  sim.attach_workload(WorkloadPlan::build(wc));
  sim.run_until(from_sec(5.0));
  for (const auto& stream : sim.plan().bg_streams) {
    REQUIRE(sim.flow_table().classify(stream.tuple) == FlowClass::Long);
  }
}

TEST_CASE("workload build is a pure function of (config, seed)") {
  WorkloadConfig wc;
  wc.horizon = from_sec(30.0);
  wc.seed = 404;
  const WorkloadPlan a = WorkloadPlan::build(wc);
  const WorkloadPlan b = WorkloadPlan::build(wc);
  REQUIRE(a.app_flows.size() == b.app_flows.size());
  for (std::size_t i = 0; i < a.app_flows.size(); ++i) {
    REQUIRE(a.app_flows[i].flow_id == b.app_flows[i].flow_id);
    REQUIRE(a.app_flows[i].n_packets == b.app_flows[i].n_packets);
    REQUIRE(a.app_flows[i].start_time == b.app_flows[i].start_time);
    REQUIRE(a.app_flows[i].tuple == b.app_flows[i].tuple);
  }
}
