#include "pumpwise/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "pumpwise/binding.hpp"

namespace pumpwise {

std::string format_number(const Rational& r) {
  std::string text = format_fixed(r, 4);
  if (text.find('.') != std::string::npos) {
    while (text.back() == '0') text.pop_back();
    if (text.back() == '.') text.pop_back();
  }
  return text;
}

std::string format_pct(const Rational& r) { return format_fixed(r, 2); }

std::string render_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size(), 0);
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    std::string text;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      // first column left-aligned, numbers right-aligned
      std::string pad(width[c] - cells[c].size(), ' ');
      if (c == 0) {
        text += cells[c] + pad;
      } else {
        text += "  " + pad + cells[c];
      }
    }
    while (!text.empty() && text.back() == ' ') text.pop_back();
    os << text << '\n';
  };
  line(header);
  for (const auto& row : rows) line(row);
  return os.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << kSweepCsvHeader << '\n';
  for (const SweepRow& r : rows) {
    os << format_number(r.throughput_msps) << ',' << r.dsp_base << ',' << r.dsp_s_pump << ','
       << r.dsp_m_pump << ',' << format_pct(r.pct_base) << ',' << format_pct(r.pct_s_pump) << ','
       << format_pct(r.pct_m_pump) << '\n';
  }
  return os.str();
}

std::string plan_table(const Dfg& dfg, const PumpPlan& plan) {
  BindingResult binding = bind(dfg, plan);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < dfg.tasks.size(); ++i) {
    const TaskPlan& tp = plan.at(dfg.tasks[i].name);
    rows.push_back({tp.name, std::to_string(tp.m), format_number(tp.f_mhz), std::to_string(tp.ii),
                    std::to_string(binding.tasks[i].n_fu_dsp)});
  }
  rows.push_back({"total", "", "", "", std::to_string(binding.total_dsp)});
  return render_table({"task", "M", "f_mhz", "II", "DSPs"}, rows);
}

ReportBundle make_report(const Dfg& dfg, const ReportOptions& options) {
  ReportBundle bundle;
  for (Strategy s : {Strategy::Base, Strategy::SPump, Strategy::MPump}) {
    bundle.plans.push_back(make_plan(dfg, options.f_base_mhz, s));
  }
  bundle.sweep = sweep(dfg, options.f_lo, options.f_hi, options.step);
  bundle.sweep_csv = sweep_csv(bundle.sweep);

  std::ostringstream plans;
  std::vector<std::vector<std::string>> sim_rows;
  for (const PumpPlan& plan : bundle.plans) {
    BindingResult b = bind(dfg, plan);
    plans << "[" << to_string(plan.strategy) << "] base clock " << format_number(plan.kernel_base_clock_mhz)
          << " MHz, DSP " << b.total_dsp << " (" << format_pct(b.dsp_pct) << " %), throughput "
          << format_number(graph_throughput(dfg, plan)) << " msps\n"
          << plan_table(dfg, plan) << '\n';

    SimCheck check{plan.strategy, analytic_throughput(dfg, plan), simulate(dfg, plan, options.sim)};
    check.rel_error = check.report.stalled
                          ? 1.0
                          : relative_error(check.report.throughput_msps, check.analytic_msps);
    char err[32];
    std::snprintf(err, sizeof err, "%.3f", 100.0 * check.rel_error);
    sim_rows.push_back({std::string(to_string(plan.strategy)), format_number(check.analytic_msps),
                        check.report.stalled ? "stalled" : format_number(check.report.throughput_msps),
                        err, std::to_string(check.report.events)});
    bundle.checks.push_back(std::move(check));
  }
  bundle.plan_summary = plans.str();
  bundle.sim_table =
      render_table({"strategy", "analytic_msps", "simulated_msps", "err_pct", "events"}, sim_rows);

  std::ostringstream summary;
  summary << "graph: " << (dfg.description.empty() ? "(unnamed)" : dfg.description) << '\n'
          << "tasks: " << dfg.tasks.size() << ", channels: " << dfg.channels.size()
          << ", device DSPs: " << dfg.device_dsp_total << '\n';
  if (dfg.memory_bound_msps) {
    summary << "memory bound: " << format_number(*dfg.memory_bound_msps) << " msps\n";
  }
  summary << "s-pump saves DSPs up to f_base " << format_number(degeneration_clock(dfg, Strategy::SPump))
          << " MHz, m-pump up to " << format_number(degeneration_clock(dfg, Strategy::MPump))
          << " MHz\n\n"
          << bundle.plan_summary << "simulation cross-check (" << options.sim.iterations
          << " iterations)\n"
          << bundle.sim_table << '\n'
          << "sweep: " << bundle.sweep.size() << " rows, f_base " << format_number(options.f_lo)
          << ".." << format_number(options.f_hi) << " step " << format_number(options.step)
          << " MHz\n";
  bundle.summary = summary.str();
  return bundle;
}

}  // namespace pumpwise
