#include "pumpwise/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "pumpwise/binding.hpp"
#include "pumpwise/dfg.hpp"
#include "pumpwise/error.hpp"
#include "pumpwise/planner.hpp"
#include "pumpwise/report.hpp"
#include "pumpwise/sim.hpp"

namespace pumpwise::cli {

namespace {

namespace fs = std::filesystem;

// Relative error above which `simulate` reports a regression.
constexpr double kSimRegressionThreshold = 0.05;
// Measurement windows shorter than this draw a warning.
constexpr std::int64_t kSmallWindow = 100;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Infeasible: return kInfeasible;
    case ErrorKind::Precondition: return kUsage;
    default: return kValidation;
  }
}

struct Inputs {
  std::string dfg_path;
  std::string char_path;

  Dfg load() const {
    Dfg dfg = load_dfg(dfg_path);
    if (!char_path.empty()) dfg = merge_characterization(dfg, load_characterization(char_path));
    return dfg;
  }
};

void add_inputs(CLI::App* cmd, Inputs& in) {
  cmd->add_option("dfg", in.dfg_path, "DFG description (JSON)")->required();
  cmd->add_option("--char", in.char_path, "characterization file merged before use");
}

// Numeric flags are usage errors when malformed, not data errors.
Rational number_arg(const std::string& text, const char* flag) {
  try {
    return parse_rational(text);
  } catch (const Error&) {
    throw Error(ErrorKind::Precondition, std::string("invalid value for ") + flag + ": '" + text + "'");
  }
}

std::string percent(double rel) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", 100.0 * rel);
  return buf;
}

std::string plan_file_name(const std::string& dfg_path, Strategy s, const Rational& f_base) {
  std::string tag(to_string(s));
  tag.erase(std::remove(tag.begin(), tag.end(), '-'), tag.end());
  std::string f = format_number(f_base);
  std::replace(f.begin(), f.end(), '.', '_');
  return fs::path(dfg_path).stem().string() + "-" + tag + f + ".plan";
}

int cmd_analyze(const Inputs& in, const std::string& f_base_text, std::ostream& out) {
  Dfg dfg = in.load();
  Rational f_base = number_arg(f_base_text, "--f-base");
  std::int64_t s = s_max(dfg, f_base);
  std::vector<std::vector<std::string>> rows;
  for (const Task& t : dfg.tasks) {
    rows.push_back({t.name, std::to_string(task_ii_min(t, f_base)), std::to_string(t.n_op_dsp),
                    format_number(t.f_max_mhz), std::to_string(m_max(t.f_max_mhz, f_base, t.n_op_dsp)),
                    std::to_string(s)});
  }
  out << "f_base " << format_number(f_base) << " MHz, " << dfg.tasks.size() << " tasks, "
      << dfg.channels.size() << " channels, device DSPs " << dfg.device_dsp_total << '\n'
      << render_table({"task", "ii_min", "n_op_dsp", "f_max_mhz", "m_max", "s_max"}, rows);
  return kOk;
}

int cmd_optimize(const Inputs& in, const std::string& f_base_text, const std::string& strategy_text,
                 std::string out_path, std::ostream& out) {
  Dfg dfg = in.load();
  Rational f_base = number_arg(f_base_text, "--f-base");
  Strategy strategy = parse_strategy(strategy_text);
  PumpPlan base = make_plan(dfg, f_base, Strategy::Base);
  PumpPlan plan = make_plan(dfg, f_base, strategy);
  BindingResult before = bind(dfg, base);
  BindingResult after = bind(dfg, plan);
  Rational phi_base = graph_throughput(dfg, base);
  Rational phi = graph_throughput(dfg, plan);

  out << "strategy " << to_string(strategy) << ", base clock " << format_number(f_base) << " MHz\n";
  if (strategy == Strategy::SPump) {
    out << "kernel clock " << format_number(plan.tasks.front().f_mhz) << " MHz\n";
  }
  out << plan_table(dfg, plan);
  out << "DSP " << before.total_dsp << " → " << after.total_dsp << " ("
      << format_pct(before.dsp_pct) << " % → " << format_pct(after.dsp_pct) << " %), ";
  if (phi == phi_base) {
    out << "throughput " << format_number(phi) << " msps preserved\n";
  } else {
    out << "throughput " << format_number(phi) << " msps (base " << format_number(phi_base)
        << " msps)\n";
  }
  if (out_path.empty()) out_path = plan_file_name(in.dfg_path, strategy, f_base);
  save_plan(plan, out_path);
  out << "plan written to " << out_path << '\n';
  return kOk;
}

int cmd_sweep(const Inputs& in, const std::string& lo, const std::string& hi,
              const std::string& step, const std::string& out_path, std::ostream& out,
              std::ostream& err) {
  Dfg dfg = in.load();
  auto rows = sweep(dfg, number_arg(lo, "--f-lo"), number_arg(hi, "--f-hi"), number_arg(step, "--step"));
  if (rows.empty()) err << "warning: no feasible base clock in the requested range\n";
  std::string csv = sweep_csv(rows);
  if (out_path.empty()) {
    out << csv;
  } else {
    write_text_file(out_path, csv);
    out << rows.size() << " rows written to " << out_path << '\n';
  }
  return kOk;
}

int cmd_simulate(const Inputs& in, const std::string& plan_path, std::int64_t iterations,
                 std::optional<std::int64_t> warmup, const std::string& trace_path,
                 std::ostream& out, std::ostream& err) {
  Dfg dfg = in.load();
  PumpPlan plan = load_plan(plan_path);
  validate_plan(dfg, plan);
  SimConfig cfg;
  cfg.iterations = iterations;
  cfg.warmup = warmup;
  std::ofstream trace;
  if (!trace_path.empty()) {
    trace.open(trace_path, std::ios::trunc);
    if (!trace) throw Error(ErrorKind::Io, "cannot write '" + trace_path + "'");
    trace << "time_ps,task,kind,iteration\n";
    cfg.trace = &trace;
  }
  const auto needed = balanced_fifo_depths(dfg, {plan}, 1);
  for (std::size_t e = 0; e < dfg.channels.size(); ++e) {
    const Channel& c = dfg.channels[e];
    if (c.depth < needed[e]) {
      err << "warning: channel " << c.from << "->" << c.to << " depth " << c.depth
          << " is below the " << needed[e] << " tokens that cover its reconvergent latency\n";
    }
  }
  SimReport report = simulate(dfg, plan, cfg);
  if (iterations - report.warmup < kSmallWindow) {
    err << "warning: measurement window too small (" << iterations - report.warmup
        << " tokens)\n";
  }
  Rational analytic = analytic_throughput(dfg, plan);
  out << "plan " << to_string(plan.strategy) << " at base clock "
      << format_number(plan.kernel_base_clock_mhz) << " MHz, " << iterations
      << " iterations, warmup " << report.warmup << '\n';
  if (report.stalled) {
    out << "stalled at " << report.stall_time_ps << " ps, last progress by task '"
        << report.stall_task << "'\n";
    return kSimRegression;
  }
  double rel = relative_error(report.throughput_msps, analytic);
  out << "throughput " << format_fixed(report.throughput_msps, 3) << " msps, analytic "
      << format_number(analytic) << " msps, err " << percent(rel) << " %\n";
  std::vector<std::vector<std::string>> rows;
  for (const ChannelStats& c : report.channels) {
    rows.push_back({c.from + "->" + c.to, std::to_string(c.depth), std::to_string(c.peak_occupancy)});
  }
  if (!rows.empty()) out << render_table({"channel", "depth", "peak"}, rows);
  out << "events " << report.events << ", end time " << report.end_time_ps << " ps\n";
  if (rel > kSimRegressionThreshold) {
    err << "error: simulated throughput deviates " << percent(rel) << " % from the analytic model\n";
    return kSimRegression;
  }
  return kOk;
}

int cmd_report(const Inputs& in, const ReportOptions& options, const std::string& out_dir,
               std::ostream& out) {
  Dfg dfg = in.load();
  ReportBundle bundle = make_report(dfg, options);
  fs::create_directories(out_dir);
  for (const PumpPlan& plan : bundle.plans) {
    save_plan(plan, fs::path(out_dir) /
                        plan_file_name(in.dfg_path, plan.strategy, options.f_base_mhz));
  }
  write_text_file(fs::path(out_dir) / "sweep.csv", bundle.sweep_csv);
  write_text_file(fs::path(out_dir) / "summary.txt", bundle.summary);
  out << bundle.summary;
  for (const SimCheck& c : bundle.checks) {
    if (c.report.stalled || c.rel_error > kSimRegressionThreshold) return kSimRegression;
  }
  return kOk;
}

int cmd_merge(const Inputs& in, const std::string& out_path, std::ostream& out) {
  Dfg dfg = in.load();
  if (out_path.empty()) {
    out << dump_dfg(dfg);
  } else {
    save_dfg(dfg, out_path);
    out << "merged graph written to " << out_path << '\n';
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Task-level multi-pumping planner and multi-clock dataflow simulator", "pumpwise"};
  app.require_subcommand(1);

  Inputs in;
  std::string f_base;
  std::string strategy = "m-pump";
  std::string out_path;
  std::string f_lo, f_hi, step;
  std::int64_t iterations = 10000;
  std::optional<std::int64_t> warmup;
  std::string plan_path, trace_path;

  auto* analyze = app.add_subcommand("analyze", "per-task II, DSP ops, f_max and pumping limits");
  add_inputs(analyze, in);
  analyze->add_option("--f-base", f_base, "base clock in MHz")->required();

  auto* optimize = app.add_subcommand("optimize", "select pumping factors and write a plan");
  add_inputs(optimize, in);
  optimize->add_option("--f-base", f_base, "base clock in MHz")->required();
  optimize->add_option("--strategy", strategy, "base, s-pump or m-pump")
      ->check(CLI::IsMember({"base", "s-pump", "m-pump"}));
  optimize->add_option("--out", out_path, "plan file (default <dfg>-<strategy><f_base>.plan)");

  auto* sweep_cmd = app.add_subcommand("sweep", "throughput vs DSP over a base-clock range (CSV)");
  add_inputs(sweep_cmd, in);
  sweep_cmd->add_option("--f-lo", f_lo, "lowest base clock in MHz")->required();
  sweep_cmd->add_option("--f-hi", f_hi, "highest base clock in MHz")->required();
  sweep_cmd->add_option("--step", step, "base clock step in MHz")->required();
  sweep_cmd->add_option("--out", out_path, "CSV file (default stdout)");

  auto* simulate_cmd = app.add_subcommand("simulate", "simulate a plan and compare with the model");
  add_inputs(simulate_cmd, in);
  simulate_cmd->add_option("plan", plan_path, "plan file")->required();
  simulate_cmd->add_option("--iterations", iterations, "tokens emitted by each source")
      ->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--warmup", warmup, "tokens excluded from the measurement");
  simulate_cmd->add_option("--trace", trace_path, "write an event trace CSV");

  auto* report = app.add_subcommand("report", "plans, sweep and simulation cross-check");
  add_inputs(report, in);
  report->add_option("--f-base", f_base, "base clock in MHz")->required();
  report->add_option("--f-lo", f_lo, "lowest base clock in MHz")->required();
  report->add_option("--f-hi", f_hi, "highest base clock in MHz")->required();
  report->add_option("--step", step, "base clock step in MHz")->required();
  report->add_option("--iterations", iterations, "simulated tokens")->check(CLI::PositiveNumber);
  report->add_option("--warmup", warmup, "tokens excluded from the measurement");
  report->add_option("--out", out_path, "output directory")->required();

  auto* merge = app.add_subcommand("merge", "merge a characterization file into a DFG");
  add_inputs(merge, in);
  merge->add_option("--out", out_path, "merged DFG file (default stdout)");

  std::vector<std::string> argv_store{"pumpwise"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*analyze) return cmd_analyze(in, f_base, out);
    if (*optimize) return cmd_optimize(in, f_base, strategy, out_path, out);
    if (*sweep_cmd) return cmd_sweep(in, f_lo, f_hi, step, out_path, out, err);
    if (*simulate_cmd) {
      return cmd_simulate(in, plan_path, iterations, warmup, trace_path, out, err);
    }
    if (*report) {
      ReportOptions options{number_arg(f_base, "--f-base"), number_arg(f_lo, "--f-lo"),
                            number_arg(f_hi, "--f-hi"), number_arg(step, "--step"), SimConfig{}};
      options.sim.iterations = iterations;
      options.sim.warmup = warmup;
      return cmd_report(in, options, out_path, out);
    }
    if (*merge) return cmd_merge(in, out_path, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kUsage;
}

}  // namespace pumpwise::cli
