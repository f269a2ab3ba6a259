#include "pumpwise/binding.hpp"

#include <algorithm>

#include "pumpwise/error.hpp"

namespace pumpwise {

namespace {

std::int64_t ceil_ratio(std::int64_t num, std::int64_t den) { return (num + den - 1) / den; }

}  // namespace

std::int64_t fu_count(std::int64_t n_op, std::int64_t ii) {
  if (ii < 1 || n_op < 0) throw Error(ErrorKind::Precondition, "fu_count: need n_op >= 0, ii >= 1");
  return ceil_ratio(n_op, ii);
}

std::int64_t dsp_constraint(std::int64_t n_dsp_base, std::int64_t m) {
  if (m < 1 || n_dsp_base < 0) {
    throw Error(ErrorKind::Precondition, "dsp_constraint: need n_dsp_base >= 0, m >= 1");
  }
  return ceil_ratio(n_dsp_base, m);
}

std::int64_t scaled_partition(std::int64_t base_factor, std::int64_t m) {
  if (m < 1 || base_factor < 1) {
    throw Error(ErrorKind::Precondition, "scaled_partition: arguments must be >= 1");
  }
  return std::max<std::int64_t>(1, ceil_ratio(base_factor, m));
}

BindingResult bind(const Dfg& dfg, const PumpPlan& plan) {
  validate_plan(dfg, plan);
  BindingResult result;
  for (const Task& task : dfg.tasks) {
    const TaskPlan& tp = plan.at(task.name);
    TaskBinding tb;
    tb.name = task.name;
    tb.n_fu_dsp = fu_count(task.n_op_dsp, tp.ii);
    tb.n_mem_ports = fu_count(task.n_op_mem, tp.ii);
    tb.partition_factor = scaled_partition(task.base_partition_factor, tp.m);
    result.total_dsp += tb.n_fu_dsp;
    result.tasks.push_back(std::move(tb));
  }
  result.dsp_pct = Rational(100 * result.total_dsp, dfg.device_dsp_total);
  return result;
}

}  // namespace pumpwise
