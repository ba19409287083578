// flowsim: experiment runner for short/long flow segregation over two
// SD-WAN tunnels. Subcommands: run, sweep, bench, check, dump-workload.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "flowsim/acceptance.hpp"
#include "flowsim/flowsim.hpp"

namespace {

using namespace flowsim;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> threshold;
  std::optional<double> utilization;
  std::optional<double> flow_rate;
  std::optional<double> horizon_s;
  bool fast = false;
};

ExperimentConfig resolve_config(const CommonArgs& args) {
  ExperimentConfig c = args.config_path.empty() ? ExperimentConfig{} : load_config(args.config_path);
  if (args.seed) c.seed = *args.seed;
  if (args.threshold) c.threshold = *args.threshold;
  if (args.utilization) c.background_utilization = *args.utilization;
  if (args.flow_rate) c.flow_rate_per_s = *args.flow_rate;
  if (args.horizon_s) c.horizon_s = *args.horizon_s;
  if (!args.out_dir.empty()) c.output_dir = args.out_dir;
  if (args.fast) {
    // 10x scaled-down preset: same relative utilizations, ~10x faster
    c.tunnel_capacity_bps /= 10;
    c.flow_pace_mbps /= 10.0;
    c.flow_rate_per_s /= 10.0;
  }
  c.validate();
  return c;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("-c,--config", args.config_path, "config JSON file (defaults when omitted)");
  cmd->add_option("-o,--out", args.out_dir, "output directory (overrides config)");
  cmd->add_option("--seed", args.seed, "seed override");
  cmd->add_option("--threshold", args.threshold, "splitter threshold override");
  cmd->add_option("--utilization", args.utilization, "background utilization override");
  cmd->add_option("--flow-rate", args.flow_rate, "app flow arrival rate override (flows/s)");
  cmd->add_option("--horizon", args.horizon_s, "run length override (seconds)");
  cmd->add_flag("--fast", args.fast, "100 Mbps scaled preset for quick runs");
}

int cmd_run(const CommonArgs& args, bool keep_trace) {
  const ExperimentConfig c = resolve_config(args);
  ensure_dir(c.output_dir);
  save_config(c, c.output_dir + "/config.json");

  std::cerr << "running seed-matched pair: " << c.baseline_policy << " vs "
            << c.treatment_policy << ", seed " << c.seed << ", rho "
            << c.background_utilization << ", T " << c.threshold << "\n";

  const RunArtifacts baseline =
      run_single(c, policy_from_name(c.baseline_policy), c.seed, keep_trace);
  const RunArtifacts treatment =
      run_single(c, policy_from_name(c.treatment_policy), c.seed, keep_trace);
  ExperimentResult result;
  result.baseline = baseline.report;
  result.treatment = treatment.report;
  result.short_speedup = speedup(result.baseline, result.treatment, FlowSelector::Short);
  result.long_speedup = speedup(result.baseline, result.treatment, FlowSelector::Long);

  write_text_file(c.output_dir + "/report.json", experiment_to_json(c, result).dump(2) + "\n");
  write_text_file(c.output_dir + "/report.txt",
                  report_to_text(result.baseline) + "\n" + report_to_text(result.treatment));
  if (keep_trace) {
    write_text_file(c.output_dir + "/trace_baseline.csv", trace_to_csv(baseline.trace));
    write_text_file(c.output_dir + "/trace_treatment.csv", trace_to_csv(treatment.trace));
  }
  for (const auto& [name, rep] : {std::pair<std::string, const RunReport&>{"baseline", result.baseline},
                                  {"treatment", result.treatment}}) {
    if (rep.short_flows.fct.n > 0) {
      write_text_file(c.output_dir + "/fct_hist_short_" + name + ".csv",
                      histogram_to_csv(rep.short_flows.fct_hist));
    }
    if (rep.short_flows.jitter.n > 0) {
      write_text_file(c.output_dir + "/jitter_hist_short_" + name + ".csv",
                      histogram_to_csv(rep.short_flows.jitter_hist));
    }
  }

  std::printf("flows: %llu app (%llu short, %llu long measured)\n",
              static_cast<unsigned long long>(result.treatment.app_flows_total),
              static_cast<unsigned long long>(result.treatment.short_flows.flows),
              static_cast<unsigned long long>(result.treatment.long_flows.flows));
  std::printf("short-flow FCT: baseline %.1f us, treatment %.1f us, speedup %.3f (p99 %.3f)\n",
              result.short_speedup.baseline_mean_us, result.short_speedup.treatment_mean_us,
              result.short_speedup.mean_ratio, result.short_speedup.p99_ratio);
  std::printf("long-flow FCT: baseline %.1f us, treatment %.1f us, ratio %.3f\n",
              result.long_speedup.baseline_mean_us, result.long_speedup.treatment_mean_us,
              result.long_speedup.treatment_mean_us > 0
                  ? result.long_speedup.treatment_mean_us / result.long_speedup.baseline_mean_us
                  : 0.0);
  std::printf("report: %s/report.json\n", c.output_dir.c_str());
  return 0;
}

int cmd_sweep(const CommonArgs& args, const std::string& axis_name) {
  const ExperimentConfig c = resolve_config(args);
  ensure_dir(c.output_dir);
  const SweepAxis axis = sweep_axis_from_name(axis_name);
  const auto values = sweep_values(c, axis);
  std::cerr << "sweeping " << sweep_axis_name(axis) << " over " << values.size()
            << " points x " << c.seeds.size() << " seeds\n";
  const auto rows = sweep(c, axis, values);

  const std::string base = c.output_dir + "/sweep_" + sweep_axis_name(axis);
  write_text_file(base + ".csv", sweep_to_csv(axis, rows));

  svg::Series shorts{"short flows", {}, {}};
  svg::Series longs{"long flows", {}, {}};
  svg::Series jit_b{"ecmp", {}, {}};
  svg::Series jit_t{"splitter", {}, {}};
  for (const auto& r : rows) {
    shorts.x.push_back(r.axis_value);
    shorts.y.push_back(r.speedup_short_mean);
    longs.x.push_back(r.axis_value);
    longs.y.push_back(r.speedup_long_mean);
    jit_b.x.push_back(r.axis_value);
    jit_b.y.push_back(r.jitter_mean_baseline_us);
    jit_t.x.push_back(r.axis_value);
    jit_t.y.push_back(r.jitter_mean_treatment_us);
  }
  svg::ChartOptions speed_opt;
  speed_opt.title = "FCT speedup vs " + sweep_axis_name(axis);
  speed_opt.x_label = sweep_axis_name(axis);
  speed_opt.y_label = "speedup (baseline / treatment)";
  speed_opt.reference_y = 1.0;
  write_text_file(base + ".svg", svg::line_chart({shorts, longs}, speed_opt));

  svg::ChartOptions jit_opt;
  jit_opt.title = "short-flow jitter vs " + sweep_axis_name(axis);
  jit_opt.x_label = sweep_axis_name(axis);
  jit_opt.y_label = "mean jitter (us)";
  write_text_file(base + "_jitter.svg", svg::line_chart({jit_b, jit_t}, jit_opt));

  for (const auto& r : rows) {
    std::printf("%s=%-8g speedup_short=%.3f (min seed %.3f) speedup_long=%.3f\n",
                sweep_axis_name(axis).c_str(), r.axis_value, r.speedup_short_mean,
                r.speedup_short_min, r.speedup_long_mean);
  }
  std::printf("table: %s.csv\n", base.c_str());
  return 0;
}

int cmd_bench(std::uint64_t packets, std::uint64_t flows) {
  const BenchResult r = bench_splitter(packets, flows);
  std::printf("process_packet: %llu calls over %llu flows\n",
              static_cast<unsigned long long>(r.calls),
              static_cast<unsigned long long>(r.flows));
  std::printf("mean %.1f ns/call, p99 %.1f ns/call (chunked timing)\n", r.mean_ns, r.p99_ns);
  std::printf("long-classified packets: %llu\n",
              static_cast<unsigned long long>(r.long_classified));
  const bool ok = r.mean_ns < 1000.0;
  std::printf("%s: mean per-packet cost %s 1 us\n", ok ? "PASS" : "FAIL", ok ? "<" : ">=");
  return ok ? 0 : 2;
}

int cmd_check() {
  const auto results = run_acceptance(std::cout);
  std::cout << (all_passed(results) ? "ALL CRITERIA PASSED\n" : "CRITERIA FAILED\n");
  return all_passed(results) ? 0 : 2;
}

int cmd_dump_workload(const CommonArgs& args) {
  const ExperimentConfig c = resolve_config(args);
  ensure_dir(c.output_dir);
  const WorkloadPlan plan = WorkloadPlan::build(workload_config_for(c, c.seed));
  const std::string path = c.output_dir + "/workload.csv";
  write_text_file(path, workload_to_csv(plan));
  std::printf("%zu app flows, %zu background streams -> %s\n", plan.app_flows.size(),
              plan.bg_streams.size(), path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic SD-WAN flow-splitter experiments"};
  app.require_subcommand(1);

  CommonArgs run_args;
  bool run_trace = false;
  CLI::App* run = app.add_subcommand("run", "run one seed-matched policy pair");
  add_common(run, run_args);
  run->add_flag("--trace", run_trace, "also write per-packet trace CSVs");

  CommonArgs sweep_args;
  std::string axis = "utilization";
  CLI::App* sw = app.add_subcommand("sweep", "sweep one axis, seed-averaged");
  add_common(sw, sweep_args);
  sw->add_option("--axis", axis, "utilization | threshold | pps")->required();

  std::uint64_t bench_packets = 1'000'000;
  std::uint64_t bench_flows = 10'000;
  CLI::App* bench = app.add_subcommand("bench", "microbenchmark the splitter hot path");
  bench->add_option("--packets", bench_packets, "calls to time");
  bench->add_option("--flows", bench_flows, "distinct concurrent flows");

  app.add_subcommand("check", "run the full acceptance suite");

  CommonArgs dump_args;
  CLI::App* dump = app.add_subcommand("dump-workload", "export the generated flow list as CSV");
  add_common(dump, dump_args);

  try {
    app.parse(argc, argv);
    if (run->parsed()) return cmd_run(run_args, run_trace);
    if (sw->parsed()) return cmd_sweep(sweep_args, axis);
    if (bench->parsed()) return cmd_bench(bench_packets, bench_flows);
    if (app.get_subcommand("check")->parsed()) return cmd_check();
    if (dump->parsed()) return cmd_dump_workload(dump_args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
