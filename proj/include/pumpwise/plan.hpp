#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pumpwise/dfg.hpp"
#include "pumpwise/rational.hpp"

namespace pumpwise {

enum class Strategy { Base, SPump, MPump };

std::string_view to_string(Strategy s);
/// Accepts "base", "s-pump", "m-pump".
Strategy parse_strategy(std::string_view text);

/// Clock assignment of one task: pumping factor, clock and initiation interval.
struct TaskPlan {
  std::string name;
  std::int64_t m = 1;
  Rational f_mhz;
  std::int64_t ii = 1;

  bool operator==(const TaskPlan&) const = default;
};

struct PumpPlan {
  Strategy strategy = Strategy::Base;
  Rational kernel_base_clock_mhz;
  std::vector<TaskPlan> tasks;  // same order as the DFG's tasks

  bool operator==(const PumpPlan&) const = default;

  const TaskPlan& at(std::string_view name) const;
};

/// Checks that the plan covers exactly the DFG's tasks with positive factors,
/// clocks and IIs. Throws Error(InvalidPlan).
void validate_plan(const Dfg& dfg, const PumpPlan& plan);

PumpPlan parse_plan(std::string_view json_text);
PumpPlan load_plan(const std::filesystem::path& path);
std::string dump_plan(const PumpPlan& plan);
void save_plan(const PumpPlan& plan, const std::filesystem::path& path);

}  // namespace pumpwise
