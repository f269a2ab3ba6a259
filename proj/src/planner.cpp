#include "pumpwise/planner.hpp"

#include <algorithm>

#include "pumpwise/error.hpp"

namespace pumpwise {

namespace {

void require_feasible(const Dfg& dfg, const Rational& f_base_mhz) {
  if (f_base_mhz <= 0) throw Error(ErrorKind::Precondition, "f_base must be > 0");
  for (const Task& t : dfg.tasks) {
    if (f_base_mhz > t.f_max_mhz) {
      throw Error(ErrorKind::Infeasible,
                  "base clock infeasible: " + to_string(f_base_mhz) + " MHz exceeds f_max " +
                      to_string(t.f_max_mhz) + " MHz of task '" + t.name + "'");
    }
  }
}

bool has_dsp_ops(const Dfg& dfg) {
  return std::any_of(dfg.tasks.begin(), dfg.tasks.end(),
                     [](const Task& t) { return t.n_op_dsp > 0; });
}

}  // namespace

Rational task_throughput(const Rational& f_mhz, std::int64_t ii) {
  if (f_mhz <= 0 || ii < 1) throw Error(ErrorKind::Precondition, "task_throughput: bad arguments");
  return f_mhz / ii;
}

Rational compute_throughput(const Dfg& dfg, const PumpPlan& plan) {
  validate_plan(dfg, plan);
  Rational lowest = task_throughput(plan.tasks.front().f_mhz, plan.tasks.front().ii);
  for (const TaskPlan& t : plan.tasks) lowest = std::min(lowest, task_throughput(t.f_mhz, t.ii));
  return lowest;
}

Rational graph_throughput(const Dfg& dfg, const PumpPlan& plan) {
  Rational phi = compute_throughput(dfg, plan);
  if (dfg.memory_bound_msps) phi = std::min(phi, *dfg.memory_bound_msps);
  return phi;
}

std::int64_t m_max(const Rational& f_max_mhz, const Rational& f_base_mhz, std::int64_t n_op) {
  if (f_max_mhz <= 0 || f_base_mhz <= 0 || n_op < 0) {
    throw Error(ErrorKind::Precondition, "m_max: bad arguments");
  }
  std::int64_t by_clock = floor_div(f_max_mhz / f_base_mhz);
  if (by_clock < 1) {
    throw Error(ErrorKind::Infeasible, "base clock infeasible: " + to_string(f_base_mhz) +
                                           " MHz exceeds f_max " + to_string(f_max_mhz) + " MHz");
  }
  if (n_op == 0) return 1;  // nothing to share, no pumping
  return std::min(by_clock, n_op);
}

std::int64_t s_max(const Dfg& dfg, const Rational& f_base_mhz) {
  if (f_base_mhz <= 0) throw Error(ErrorKind::Precondition, "f_base must be > 0");
  Rational lowest = min_f_max(dfg);
  std::int64_t s = floor_div(lowest / f_base_mhz);
  if (s < 1) {
    throw Error(ErrorKind::Infeasible, "base clock infeasible: " + to_string(f_base_mhz) +
                                           " MHz exceeds min f_max " + to_string(lowest) + " MHz");
  }
  return s;
}

PumpPlan make_plan(const Dfg& dfg, const Rational& f_base_mhz, Strategy strategy) {
  require_feasible(dfg, f_base_mhz);
  PumpPlan plan;
  plan.strategy = strategy;
  plan.kernel_base_clock_mhz = f_base_mhz;

  // A single kernel clock only helps when some task has DSP work to share.
  const std::int64_t s =
      strategy == Strategy::SPump && has_dsp_ops(dfg) ? s_max(dfg, f_base_mhz) : 1;

  for (const Task& task : dfg.tasks) {
    const std::int64_t ii_min = task_ii_min(task, f_base_mhz);
    TaskPlan tp{task.name, 1, f_base_mhz, ii_min};
    const bool pumped = task.n_op_dsp > 0;
    switch (strategy) {
      case Strategy::Base:
        break;
      case Strategy::MPump:
        if (pumped) {
          tp.m = m_max(task.f_max_mhz, f_base_mhz, task.n_op_dsp);
          tp.f_mhz = f_base_mhz * tp.m;
          tp.ii = tp.m * ii_min;
        }
        break;
      case Strategy::SPump:
        tp.f_mhz = f_base_mhz * s;
        if (pumped) {
          tp.m = s;
          tp.ii = s * ii_min;
        }
        break;
    }
    plan.tasks.push_back(std::move(tp));
  }
  return plan;
}

Rational degeneration_clock(const Dfg& dfg, Strategy strategy) {
  // Pumping by 2 needs f_base <= f / 2 for the relevant clock bound f, and
  // only saves DSPs on tasks with at least two operations to share.
  Rational clock(0);
  switch (strategy) {
    case Strategy::Base:
      break;
    case Strategy::SPump: {
      bool shareable = std::any_of(dfg.tasks.begin(), dfg.tasks.end(),
                                   [](const Task& t) { return t.n_op_dsp >= 2; });
      if (shareable) clock = min_f_max(dfg) / 2;
      break;
    }
    case Strategy::MPump:
      for (const Task& t : dfg.tasks) {
        if (t.n_op_dsp >= 2) clock = std::max(clock, t.f_max_mhz / 2);
      }
      break;
  }
  return clock;
}

std::vector<SweepRow> sweep(const Dfg& dfg, const Rational& f_lo, const Rational& f_hi,
                            const Rational& step) {
  if (f_lo <= 0 || f_hi < f_lo || step <= 0) {
    throw Error(ErrorKind::Precondition, "empty range: need 0 < f_lo <= f_hi and step > 0");
  }
  const Rational ceiling = min_f_max(dfg);
  std::vector<SweepRow> rows;
  for (Rational f = f_lo; f <= f_hi; f += step) {
    if (f > ceiling) break;
    PumpPlan base = make_plan(dfg, f, Strategy::Base);
    BindingResult b = bind(dfg, base);
    BindingResult s = bind(dfg, make_plan(dfg, f, Strategy::SPump));
    BindingResult m = bind(dfg, make_plan(dfg, f, Strategy::MPump));
    rows.push_back(SweepRow{f, graph_throughput(dfg, base), b.total_dsp, s.total_dsp,
                            m.total_dsp, b.dsp_pct, s.dsp_pct, m.dsp_pct});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.throughput_msps != b.throughput_msps) return a.throughput_msps < b.throughput_msps;
    return a.f_base_mhz < b.f_base_mhz;
  });
  return rows;
}

}  // namespace pumpwise
