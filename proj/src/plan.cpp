#include "pumpwise/plan.hpp"

#include <set>

#include "json_util.hpp"
#include "pumpwise/error.hpp"

namespace pumpwise {

using namespace json_util;

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Base: return "base";
    case Strategy::SPump: return "s-pump";
    case Strategy::MPump: return "m-pump";
  }
  return "?";
}

Strategy parse_strategy(std::string_view text) {
  if (text == "base") return Strategy::Base;
  if (text == "s-pump") return Strategy::SPump;
  if (text == "m-pump") return Strategy::MPump;
  throw Error(ErrorKind::Parse, "unknown strategy '" + std::string(text) +
                                    "' (expected base, s-pump or m-pump)");
}

const TaskPlan& PumpPlan::at(std::string_view name) const {
  for (const TaskPlan& t : tasks) {
    if (t.name == name) return t;
  }
  throw Error(ErrorKind::InvalidPlan, "plan has no task '" + std::string(name) + "'");
}

void validate_plan(const Dfg& dfg, const PumpPlan& plan) {
  auto bad = [](const std::string& what) { throw Error(ErrorKind::InvalidPlan, what); };
  if (plan.kernel_base_clock_mhz <= 0) bad("kernel_base_clock_mhz must be > 0");
  std::set<std::string, std::less<>> seen;
  for (const TaskPlan& t : plan.tasks) {
    if (!seen.insert(t.name).second) bad("plan lists task '" + t.name + "' twice");
    if (!dfg.find_task(t.name)) bad("plan task '" + t.name + "' is not in the graph");
    if (t.m < 1) bad("plan task '" + t.name + "': m must be >= 1");
    if (t.f_mhz <= 0) bad("plan task '" + t.name + "': f_mhz must be > 0");
    if (t.ii < 1) bad("plan task '" + t.name + "': ii must be >= 1");
  }
  for (const Task& t : dfg.tasks) {
    if (!seen.contains(t.name)) bad("plan does not cover task '" + t.name + "'");
  }
}

PumpPlan parse_plan(std::string_view json_text) {
  json root = parse(json_text);
  expect_object(root, "<root>");
  reject_unknown(root, {"strategy", "kernel_base_clock_mhz", "tasks"}, "<root>");
  PumpPlan plan;
  plan.strategy = parse_strategy(get_string(require(root, "strategy", "<root>"), "strategy"));
  plan.kernel_base_clock_mhz =
      get_rational(require(root, "kernel_base_clock_mhz", "<root>"), "kernel_base_clock_mhz");
  const json& tasks = require(root, "tasks", "<root>");
  if (!tasks.is_array()) fail("tasks", "expected an array");
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    std::string p = "tasks[" + std::to_string(i) + "]";
    expect_object(tasks[i], p);
    reject_unknown(tasks[i], {"name", "m", "f_mhz", "ii"}, p);
    TaskPlan t;
    t.name = get_string(require(tasks[i], "name", p), child(p, "name"));
    t.m = get_int(require(tasks[i], "m", p), child(p, "m"));
    t.f_mhz = get_rational(require(tasks[i], "f_mhz", p), child(p, "f_mhz"));
    t.ii = get_int(require(tasks[i], "ii", p), child(p, "ii"));
    plan.tasks.push_back(std::move(t));
  }
  return plan;
}

PumpPlan load_plan(const std::filesystem::path& path) {
  std::string text = read_text_file(path);
  try {
    return parse_plan(text);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::string dump_plan(const PumpPlan& plan) {
  ordered_json root;
  root["strategy"] = std::string(to_string(plan.strategy));
  root["kernel_base_clock_mhz"] = to_json(plan.kernel_base_clock_mhz);
  ordered_json tasks = ordered_json::array();
  for (const TaskPlan& t : plan.tasks) {
    tasks.push_back({{"name", t.name}, {"m", t.m}, {"f_mhz", to_json(t.f_mhz)}, {"ii", t.ii}});
  }
  root["tasks"] = std::move(tasks);
  return root.dump(2) + "\n";
}

void save_plan(const PumpPlan& plan, const std::filesystem::path& path) {
  write_text_file(path, dump_plan(plan));
}

}  // namespace pumpwise
