#pragma once

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "flowsim/bench.hpp"
#include "flowsim/experiment.hpp"
#include "flowsim/io.hpp"

namespace flowsim {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace acceptance_detail {

inline std::string fmt(const char* pattern, ...) {
  char buf[1024];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof(buf), pattern, args);
  va_end(args);
  return buf;
}

// criterion 1: incremental checksum == full recompute on 10k random
// rewrites, in under a second
inline CriterionResult checksum_equivalence() {
  CriterionResult r{1, "checksum-incremental-vs-full-recompute"};
  std::mt19937_64 rng(2024);
  const auto t0 = std::chrono::steady_clock::now();
  std::uint64_t mismatches = 0;
  for (int i = 0; i < 10'000; ++i) {
    PacketHeader h = PacketHeader::make(
        static_cast<std::uint32_t>(rng()), static_cast<std::uint32_t>(rng()),
        static_cast<std::uint8_t>(rng() % 256), static_cast<std::uint16_t>(20 + rng() % 1481),
        static_cast<std::uint8_t>(rng() % 256), static_cast<std::uint16_t>(rng() % 65536),
        static_cast<std::uint8_t>(1 + rng() % 255));
    PacketHeader rewritten = set_tos(h, static_cast<std::uint8_t>(rng() % 256));
    std::array<std::uint8_t, 20> bytes{};
    auto view = rewritten.bytes();
    std::copy(view.begin(), view.end(), bytes.begin());
    bytes[10] = 0;
    bytes[11] = 0;
    if (rewritten.header_checksum() != internet_checksum(bytes) || !rewritten.well_formed()) {
      ++mismatches;
    }
  }
  const double elapsed_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.pass = mismatches == 0 && elapsed_s < 1.0;
  r.detail = fmt("10000 rewrites, %llu mismatches, %.3f s",
                 static_cast<unsigned long long>(mismatches), elapsed_s);
  return r;
}

// criterion 2: classification counts match the splitter algorithm exactly
inline CriterionResult splitter_fidelity() {
  CriterionResult r{2, "splitter-classification-fidelity"};
  PacketHeader h = PacketHeader::make(0x0a000001, 0x0a000002, kProtocolTcp, 1500);

  FlowTable t40(40);
  int shorts = 0, longs = 0;
  for (int i = 0; i < 100; ++i) {
    (process_packet(t40, h, 1, 2, i).flow_class == FlowClass::Short ? shorts : longs) += 1;
  }

  FlowTable t1(1);
  int t1_longs = 0;
  for (int i = 0; i < 25; ++i) {
    t1_longs += process_packet(t1, h, 1, 2, i).flow_class == FlowClass::Long ? 1 : 0;
  }

  FlowTable tu(40);
  PacketHeader udp = PacketHeader::make(0x0a000001, 0x0a000002, kProtocolUdp, 1500);
  bool udp_untouched = true;
  for (int i = 0; i < 50; ++i) {
    const SplitResult res = process_packet(tu, udp, 1, 2, i);
    udp_untouched = udp_untouched && res.header == udp && res.flow_class == FlowClass::Short;
  }

  r.pass = shorts == 39 && longs == 61 && t1_longs == 25 && udp_untouched && tu.size() == 0;
  r.detail = fmt("T=40: %d short / %d long (want 39/61); T=1 longs 25/25: %s; "
                 "non-TCP untouched, table size %zu",
                 shorts, longs, t1_longs == 25 ? "yes" : "no", tu.size());
  return r;
}

// criterion 3: strict 30 s idle boundary with history reset
inline CriterionResult eviction_boundary() {
  CriterionResult r{3, "idle-eviction-boundary"};
  PacketHeader h = PacketHeader::make(0x0a000001, 0x0a000002, kProtocolTcp, 1500);

  FlowTable evicted(2, 30 * kNsPerSec);
  for (int i = 0; i < 5; ++i) {
    process_packet(evicted, h, 1, 2, 0);
  }
  const std::size_t removed = evicted.evict_idle(from_us(30'000'001));
  const FlowClass after = process_packet(evicted, h, 1, 2, from_us(30'000'001)).flow_class;

  FlowTable survivor(2, 30 * kNsPerSec);
  for (int i = 0; i < 5; ++i) {
    process_packet(survivor, h, 1, 2, 0);
  }
  const std::size_t kept = survivor.evict_idle(from_us(30'000'000));
  const FlowClass still = survivor.classify({0x0a000001, 0x0a000002, 1, 2, kProtocolTcp});

  r.pass = removed == 1 && after == FlowClass::Short && kept == 0 && still == FlowClass::Long;
  r.detail = fmt("idle 30s+1us: evicted=%zu, next packet %s; idle 30s exactly: evicted=%zu, "
                 "flow still %s",
                 removed, after == FlowClass::Short ? "Short" : "Long", kept,
                 still == FlowClass::Long ? "Long" : "Short");
  return r;
}

// criterion 4: FCT closed form n*12 + 1000 us for n in {1, 5, 100}
inline CriterionResult closed_form_queueing() {
  CriterionResult r{4, "closed-form-fifo-queueing"};
  r.pass = true;
  for (std::uint32_t n : {1u, 5u, 100u}) {
    SimConfig cfg;
    cfg.threshold = 1000;  // whole flow short-marked: a single idle tunnel
    Simulation sim(cfg);
    const FiveTuple tuple{0x0a010001, 0x0a020002, 2000, 443, kProtocolTcp};
    for (std::uint32_t i = 0; i < n; ++i) {
      sim.inject_packet(make_packet(1000, tuple, 1500, i, 0), 0);
    }
    sim.run_until(from_sec(1.0));
    const SimTime fct =
        sim.trace().back().t_dest_ingress - sim.trace().front().t_splitter_egress;
    const SimTime want = from_us(12 * static_cast<std::int64_t>(n) + 1000);
    if (sim.delivered_packets() != n || fct != want) {
      r.pass = false;
    }
    r.detail += fmt("n=%u: fct=%.3f us (want %.3f); ", n, to_us(fct), to_us(want));
  }
  return r;
}

struct PairOutcome {
  double speedup_short = 0.0;
  double speedup_long = 0.0;
  double jitter_mean_base = 0.0, jitter_mean_treat = 0.0;
  double jitter_std_base = 0.0, jitter_std_treat = 0.0;
  double long_mean_base_us = 0.0, long_mean_treat_us = 0.0;
};

inline PairOutcome run_pair(const ExperimentConfig& c, std::uint64_t seed,
                            const RunReport* cached_baseline = nullptr) {
  const RunReport baseline =
      cached_baseline ? *cached_baseline
                      : run_single(c, policy_from_name(c.baseline_policy), seed).report;
  const RunReport treatment = run_single(c, policy_from_name(c.treatment_policy), seed).report;
  PairOutcome out;
  out.speedup_short = speedup(baseline, treatment, FlowSelector::Short).mean_ratio;
  out.speedup_long = speedup(baseline, treatment, FlowSelector::Long).mean_ratio;
  out.jitter_mean_base = baseline.short_flows.jitter.mean_us;
  out.jitter_mean_treat = treatment.short_flows.jitter.mean_us;
  out.jitter_std_base = baseline.short_flows.jitter.std_us;
  out.jitter_std_treat = treatment.short_flows.jitter.std_us;
  out.long_mean_base_us = baseline.long_flows.fct.mean_us;
  out.long_mean_treat_us = treatment.long_flows.fct.mean_us;
  return out;
}

}  // namespace acceptance_detail

struct AcceptanceOptions {
  ExperimentConfig base;           // the full-scale defaults
  std::vector<double> rho_sweep{0.1, 0.2, 0.3, 0.4};
  std::vector<std::uint64_t> threshold_sweep{1, 8, 16, 40};
  std::size_t threshold_seeds = 3;  // seeds used for the threshold sweep
  double threshold_rho = 0.2;
};

// Runs every acceptance criterion at full scale, printing one line per
// criterion. Heavy criteria (5, 6, 8, 9) share one utilization-by-seed
// matrix of seed-matched policy pairs.
inline std::vector<CriterionResult> run_acceptance(std::ostream& log,
                                                   const AcceptanceOptions& opt = {}) {
  using namespace acceptance_detail;
  std::vector<CriterionResult> results;
  const auto emit = [&log, &results](CriterionResult r) {
    log << (r.pass ? "PASS" : "FAIL") << "  criterion " << r.id << "  " << r.name << "  ["
        << r.detail << "]\n";
    log.flush();
    results.push_back(std::move(r));
  };

  emit(checksum_equivalence());
  emit(splitter_fidelity());
  emit(eviction_boundary());
  emit(closed_form_queueing());

  // shared matrix: rho x seed -> seed-matched pair outcomes
  const std::vector<std::uint64_t>& seeds = opt.base.seeds;
  std::vector<std::vector<PairOutcome>> matrix;  // [rho][seed]
  for (double rho : opt.rho_sweep) {
    ExperimentConfig c = opt.base;
    c.background_utilization = rho;
    std::vector<PairOutcome> row;
    for (std::uint64_t seed : seeds) {
      row.push_back(run_pair(c, seed));
      log << "  ... rho=" << rho << " seed=" << seed
          << " speedup_short=" << row.back().speedup_short
          << " speedup_long=" << row.back().speedup_long << "\n";
      log.flush();
    }
    matrix.push_back(std::move(row));
  }
  const auto rho_index = [&opt](double rho) {
    for (std::size_t i = 0; i < opt.rho_sweep.size(); ++i) {
      if (opt.rho_sweep[i] == rho) {
        return i;
      }
    }
    throw std::logic_error("rho missing from sweep");
  };

  // criterion 5: at rho=0.4, seed-mean short speedup in [1.3, 2.2], and
  // >= 1.4 for at least 4 of 5 seeds
  {
    CriterionResult r{5, "short-flow-speedup-at-40pct-utilization"};
    const auto& row = matrix[rho_index(0.4)];
    double mean = 0.0;
    int above_14 = 0;
    std::string per_seed;
    for (const auto& p : row) {
      mean += p.speedup_short;
      above_14 += p.speedup_short >= 1.4 ? 1 : 0;
      per_seed += fmt("%.2f ", p.speedup_short);
    }
    mean /= static_cast<double>(row.size());
    r.pass = mean >= 1.3 && mean <= 2.2 &&
             above_14 >= static_cast<int>(row.size()) - 1;
    r.detail = fmt("seed speedups: %s-> mean %.3f (band [1.3, 2.2]); %d/%zu seeds >= 1.4",
                   per_seed.c_str(), mean, above_14, row.size());
    emit(std::move(r));
  }

  // criterion 6: speedup grows with utilization by at least 0.15
  {
    CriterionResult r{6, "speedup-monotonic-in-utilization"};
    double lo = 0.0, hi = 0.0;
    for (const auto& p : matrix[rho_index(0.1)]) {
      lo += p.speedup_short;
    }
    for (const auto& p : matrix[rho_index(0.4)]) {
      hi += p.speedup_short;
    }
    lo /= static_cast<double>(seeds.size());
    hi /= static_cast<double>(seeds.size());
    r.pass = hi - lo >= 0.15;
    r.detail = fmt("speedup(rho=0.4)=%.3f - speedup(rho=0.1)=%.3f = %.3f (need >= 0.15)", hi, lo,
                   hi - lo);
    emit(std::move(r));
  }

  // criterion 7: threshold sweep at the highest configured app rate
  {
    CriterionResult r{7, "threshold-trend-at-peak-rate"};
    ExperimentConfig c = opt.base;
    c.background_utilization = opt.threshold_rho;
    for (double v : c.flow_rate_sweep) {
      c.flow_rate_per_s = std::max(c.flow_rate_per_s, v);
    }
    std::vector<std::uint64_t> sweep_seeds(seeds.begin(),
                                           seeds.begin() + std::min(opt.threshold_seeds, seeds.size()));
    std::vector<RunReport> baselines;
    for (std::uint64_t seed : sweep_seeds) {
      baselines.push_back(run_single(c, policy_from_name(c.baseline_policy), seed).report);
    }
    double speedup_at_8 = 0.0, speedup_at_40 = 0.0;
    bool all_ge_1 = true;
    std::string detail;
    for (std::uint64_t t : opt.threshold_sweep) {
      ExperimentConfig ct = c;
      ct.threshold = t;
      double mean = 0.0;
      for (std::size_t i = 0; i < sweep_seeds.size(); ++i) {
        mean += run_pair(ct, sweep_seeds[i], &baselines[i]).speedup_short;
      }
      mean /= static_cast<double>(sweep_seeds.size());
      if (t == 8) speedup_at_8 = mean;
      if (t == 40) speedup_at_40 = mean;
      all_ge_1 = all_ge_1 && mean >= 1.0;
      detail += fmt("T=%llu: %.3f; ", static_cast<unsigned long long>(t), mean);
      log << "  ... threshold T=" << t << " speedup_short=" << mean << "\n";
      log.flush();
    }
    r.pass = speedup_at_8 >= speedup_at_40 - 0.1 && all_ge_1;
    r.detail = detail + fmt("T8 %.3f vs T40-0.1 %.3f; all >= 1.0: %s", speedup_at_8,
                            speedup_at_40 - 0.1, all_ge_1 ? "yes" : "no");
    emit(std::move(r));
  }

  // criterion 8: splitter short-flow jitter mean and std <= ECMP, rho >= 0.2
  {
    CriterionResult r{8, "jitter-improvement-under-load"};
    r.pass = true;
    for (double rho : opt.rho_sweep) {
      if (rho < 0.2) {
        continue;
      }
      const auto& row = matrix[rho_index(rho)];
      double mb = 0, mt = 0, sb = 0, st = 0;
      for (const auto& p : row) {
        mb += p.jitter_mean_base;
        mt += p.jitter_mean_treat;
        sb += p.jitter_std_base;
        st += p.jitter_std_treat;
      }
      const auto n = static_cast<double>(row.size());
      mb /= n; mt /= n; sb /= n; st /= n;
      const bool ok = mt <= mb && st <= sb;
      r.pass = r.pass && ok;
      r.detail += fmt("rho=%.1f: mean %.1f<=%.1f std %.1f<=%.1f us %s; ", rho, mt, mb, st, sb,
                      ok ? "ok" : "VIOLATED");
    }
    emit(std::move(r));
  }

  // criterion 9: long flows protected within 10% at every rho
  {
    CriterionResult r{9, "long-flow-protection"};
    r.pass = true;
    for (double rho : opt.rho_sweep) {
      const auto& row = matrix[rho_index(rho)];
      double base = 0, treat = 0;
      for (const auto& p : row) {
        base += p.long_mean_base_us;
        treat += p.long_mean_treat_us;
      }
      const double ratio = treat / base;
      const bool ok = ratio <= 1.10;
      r.pass = r.pass && ok;
      r.detail += fmt("rho=%.1f: ratio %.3f %s; ", rho, ratio, ok ? "ok" : "VIOLATED");
    }
    emit(std::move(r));
  }

  // criterion 10: splitter overhead two orders below the smallest FCT
  {
    CriterionResult r{10, "splitter-overhead-microbenchmark"};
    const BenchResult b = bench_splitter(1'000'000, 10'000);
    r.pass = b.mean_ns < 1000.0;
    r.detail = fmt("mean %.1f ns/call, p99 %.1f ns over %llu calls, %llu flows "
                   "(smallest topology FCT is 1012 us)",
                   b.mean_ns, b.p99_ns, static_cast<unsigned long long>(b.calls),
                   static_cast<unsigned long long>(b.flows));
    emit(std::move(r));
  }

  // criterion 11: byte-identical reports and trace hashes on rerun
  {
    CriterionResult r{11, "determinism-rerun-byte-identical"};
    ExperimentConfig c = opt.base;
    c.horizon_s = 20.0;
    c.background_utilization = 0.3;
    const ExperimentResult a = run_experiment_pair(c, seeds.front());
    const ExperimentResult b = run_experiment_pair(c, seeds.front());
    const std::string ja = experiment_to_json(c, a).dump(2);
    const std::string jb = experiment_to_json(c, b).dump(2);
    r.pass = ja == jb && a.baseline.trace_hash == b.baseline.trace_hash &&
             a.treatment.trace_hash == b.treatment.trace_hash;
    r.detail = fmt("report bytes %s (%zu bytes); trace hashes %s",
                   ja == jb ? "identical" : "DIFFER", ja.size(),
                   a.treatment.trace_hash == b.treatment.trace_hash ? "identical" : "DIFFER");
    emit(std::move(r));
  }

  return results;
}

inline bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results) {
    if (!r.pass) {
      return false;
    }
  }
  return true;
}

}  // namespace flowsim
