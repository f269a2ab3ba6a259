#pragma once

// Resource sharing as performed by HLS binding. A pipeline with initiation
// interval II that issues N operations of one class per iteration needs
// ceil(N / II) functional units of that class. Classes never share units.

#include <cstdint>
#include <string>
#include <vector>

#include "pumpwise/dfg.hpp"
#include "pumpwise/plan.hpp"
#include "pumpwise/rational.hpp"

namespace pumpwise {

std::int64_t fu_count(std::int64_t n_op, std::int64_t ii);

/// DSP budget for a task pumped by m that used n_dsp_base DSPs at II 1.
std::int64_t dsp_constraint(std::int64_t n_dsp_base, std::int64_t m);

/// Memory partitioning factor after pumping by m; never below 1.
std::int64_t scaled_partition(std::int64_t base_factor, std::int64_t m);

struct TaskBinding {
  std::string name;
  std::int64_t n_fu_dsp = 0;
  std::int64_t n_mem_ports = 0;
  std::int64_t partition_factor = 1;

  bool operator==(const TaskBinding&) const = default;
};

struct BindingResult {
  std::vector<TaskBinding> tasks;
  std::int64_t total_dsp = 0;
  Rational dsp_pct;  // 100 * total_dsp / device_dsp_total

  bool operator==(const BindingResult&) const = default;
};

BindingResult bind(const Dfg& dfg, const PumpPlan& plan);

}  // namespace pumpwise
