#pragma once

// Text renderings shared by the CLI commands: aligned tables, the sweep CSV
// and the combined report bundle.

#include <cstdint>
#include <string>
#include <vector>

#include "pumpwise/dfg.hpp"
#include "pumpwise/plan.hpp"
#include "pumpwise/planner.hpp"
#include "pumpwise/rational.hpp"
#include "pumpwise/sim.hpp"

namespace pumpwise {

inline constexpr const char* kSweepCsvHeader =
    "throughput,dsp_base,dsp_s-pump,dsp_m-pump,dsp_base_pct,dsp_s-pump_pct,dsp_m-pump_pct";

/// Up to four decimals, trailing zeros trimmed: "165", "27.5", "333.3333".
std::string format_number(const Rational& r);

/// Two decimals, as used for every DSP percentage.
std::string format_pct(const Rational& r);

std::string render_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows);

std::string sweep_csv(const std::vector<SweepRow>& rows);

/// task, M, f_mhz, II, DSPs, plus a total line.
std::string plan_table(const Dfg& dfg, const PumpPlan& plan);

struct SimCheck {
  Strategy strategy;
  Rational analytic_msps;
  SimReport report;
  double rel_error = 0;
};

struct ReportBundle {
  std::vector<PumpPlan> plans;  // base, s-pump, m-pump
  std::vector<SweepRow> sweep;
  std::vector<SimCheck> checks;
  std::string plan_summary;
  std::string sweep_csv;
  std::string sim_table;
  std::string summary;  // human-readable, includes the three tables above
};

struct ReportOptions {
  Rational f_base_mhz;
  Rational f_lo;
  Rational f_hi;
  Rational step;
  SimConfig sim;
};

ReportBundle make_report(const Dfg& dfg, const ReportOptions& options);

}  // namespace pumpwise
