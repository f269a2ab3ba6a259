#pragma once

// Pumping-factor selection and throughput-vs-DSP sweeps.
//
// A task v_i clocked at f_i with initiation interval II_i sustains f_i / II_i
// samples per microsecond (MS/s); the graph sustains the minimum over its
// tasks, optionally clipped by an external memory bound. Pumping a task by M
// multiplies both its clock and its II by M, so its throughput is unchanged
// while binding needs ceil(N / (M * II)) units.

#include <cstdint>
#include <vector>

#include "pumpwise/binding.hpp"
#include "pumpwise/dfg.hpp"
#include "pumpwise/plan.hpp"
#include "pumpwise/rational.hpp"

namespace pumpwise {

Rational task_throughput(const Rational& f_mhz, std::int64_t ii);

/// min over tasks of f / II, without the memory bound.
Rational compute_throughput(const Dfg& dfg, const PumpPlan& plan);

/// compute_throughput clipped to dfg.memory_bound_msps when present.
Rational graph_throughput(const Dfg& dfg, const PumpPlan& plan);

/// min(floor(f_max / f_base), n_op), or 1 when n_op is 0.
/// Throws Error(Infeasible) "base clock infeasible" when f_base > f_max.
std::int64_t m_max(const Rational& f_max_mhz, const Rational& f_base_mhz, std::int64_t n_op);

/// floor(min f_max / f_base) over every task of the graph.
std::int64_t s_max(const Dfg& dfg, const Rational& f_base_mhz);

/// Requires f_base <= f_max of every task.
PumpPlan make_plan(const Dfg& dfg, const Rational& f_base_mhz, Strategy strategy);

/// Base clock above which the strategy no longer saves any DSP
/// (0 when it never does).
Rational degeneration_clock(const Dfg& dfg, Strategy strategy);

struct SweepRow {
  Rational f_base_mhz;
  Rational throughput_msps;  // base-plan throughput, memory-clipped
  std::int64_t dsp_base = 0;
  std::int64_t dsp_s_pump = 0;
  std::int64_t dsp_m_pump = 0;
  Rational pct_base;
  Rational pct_s_pump;
  Rational pct_m_pump;

  bool operator==(const SweepRow&) const = default;
};

/// Samples f_base = f_lo, f_lo + step, ... <= f_hi. Base clocks above any
/// task's f_max are omitted. Rows are sorted by throughput, then f_base.
/// Throws Error(Precondition) "empty range" for a malformed range.
std::vector<SweepRow> sweep(const Dfg& dfg, const Rational& f_lo, const Rational& f_hi,
                            const Rational& step);

}  // namespace pumpwise
