#include "pumpwise/dfg.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json_util.hpp"
#include "pumpwise/error.hpp"

namespace pumpwise {

using namespace json_util;

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorKind::Validation, what);
}

Ddg parse_ddg(const json& v, const std::string& path) {
  expect_object(v, path);
  reject_unknown(v, {"ops", "deps"}, path);
  Ddg ddg;
  const json& ops = require(v, "ops", path);
  if (!ops.is_array()) fail(child(path, "ops"), "expected an array");
  for (std::size_t i = 0; i < ops.size(); ++i) {
    std::string p = child(path, "ops") + "[" + std::to_string(i) + "]";
    expect_object(ops[i], p);
    reject_unknown(ops[i], {"id", "class", "delay_ns"}, p);
    Op op;
    op.id = get_string(require(ops[i], "id", p), child(p, "id"));
    op.op_class = get_string(require(ops[i], "class", p), child(p, "class"));
    op.delay_ns = get_rational(require(ops[i], "delay_ns", p), child(p, "delay_ns"));
    ddg.ops.push_back(std::move(op));
  }
  if (auto it = v.find("deps"); it != v.end()) {
    if (!it->is_array()) fail(child(path, "deps"), "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& d = (*it)[i];
      std::string p = child(path, "deps") + "[" + std::to_string(i) + "]";
      expect_object(d, p);
      reject_unknown(d, {"from", "to", "dist"}, p);
      Dep dep;
      dep.from = get_string(require(d, "from", p), child(p, "from"));
      dep.to = get_string(require(d, "to", p), child(p, "to"));
      dep.dist = get_int(require(d, "dist", p), child(p, "dist"));
      ddg.deps.push_back(std::move(dep));
    }
  }
  return ddg;
}

Task parse_task(const json& v, const std::string& path) {
  expect_object(v, path);
  reject_unknown(v,
                 {"name", "n_op_dsp", "n_op_mem", "base_partition_factor", "f_max_mhz",
                  "ii_min_base", "pipeline_depth", "ddg"},
                 path);
  Task t;
  t.name = get_string(require(v, "name", path), child(path, "name"));
  t.f_max_mhz = get_rational(require(v, "f_max_mhz", path), child(path, "f_max_mhz"));
  if (auto it = v.find("n_op_dsp"); it != v.end()) t.n_op_dsp = get_int(*it, child(path, "n_op_dsp"));
  if (auto it = v.find("n_op_mem"); it != v.end()) t.n_op_mem = get_int(*it, child(path, "n_op_mem"));
  if (auto it = v.find("base_partition_factor"); it != v.end()) {
    t.base_partition_factor = get_int(*it, child(path, "base_partition_factor"));
  }
  if (auto it = v.find("ii_min_base"); it != v.end()) {
    t.ii_min_base = get_int(*it, child(path, "ii_min_base"));
  }
  if (auto it = v.find("pipeline_depth"); it != v.end()) {
    t.pipeline_depth = get_int(*it, child(path, "pipeline_depth"));
  }
  if (auto it = v.find("ddg"); it != v.end()) t.ddg = parse_ddg(*it, child(path, "ddg"));
  return t;
}

ordered_json ddg_to_json(const Ddg& ddg) {
  ordered_json ops = ordered_json::array();
  for (const Op& op : ddg.ops) {
    ops.push_back({{"id", op.id}, {"class", op.op_class}, {"delay_ns", to_json(op.delay_ns)}});
  }
  ordered_json deps = ordered_json::array();
  for (const Dep& d : ddg.deps) {
    deps.push_back({{"from", d.from}, {"to", d.to}, {"dist", d.dist}});
  }
  return {{"ops", ops}, {"deps", deps}};
}

// Returns a directed cycle of the channel graph as task names, or empty.
std::vector<std::string> find_channel_cycle(const Dfg& dfg) {
  const std::size_t n = dfg.tasks.size();
  std::vector<std::vector<std::size_t>> succ(n);
  for (const Channel& c : dfg.channels) {
    succ[*dfg.find_task(c.from)].push_back(*dfg.find_task(c.to));
  }
  enum class Color { White, Grey, Black };
  std::vector<Color> color(n, Color::White);
  std::vector<std::size_t> stack;
  std::vector<std::string> cycle;

  auto dfs = [&](auto&& self, std::size_t u) -> bool {
    color[u] = Color::Grey;
    stack.push_back(u);
    for (std::size_t v : succ[u]) {
      if (color[v] == Color::Grey) {
        auto it = std::find(stack.begin(), stack.end(), v);
        for (; it != stack.end(); ++it) cycle.push_back(dfg.tasks[*it].name);
        cycle.push_back(dfg.tasks[v].name);
        return true;
      }
      if (color[v] == Color::White && self(self, v)) return true;
    }
    stack.pop_back();
    color[u] = Color::Black;
    return false;
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (color[i] == Color::White && dfs(dfs, i)) break;
  }
  return cycle;
}

}  // namespace

const Task& Dfg::task(std::string_view name) const {
  auto idx = find_task(name);
  if (!idx) throw Error(ErrorKind::UnknownTask, "unknown task '" + std::string(name) + "'");
  return tasks[*idx];
}

std::optional<std::size_t> Dfg::find_task(std::string_view name) const {
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i].name == name) return i;
  }
  return std::nullopt;
}

void validate_dfg(const Dfg& dfg) {
  if (dfg.tasks.empty()) invalid("empty graph");
  if (dfg.device_dsp_total < 1) invalid("device_dsp_total must be >= 1");
  if (dfg.memory_bound_msps && *dfg.memory_bound_msps <= 0) {
    invalid("memory_bound_msps must be > 0");
  }
  if (dfg.base_clock_mhz && *dfg.base_clock_mhz <= 0) invalid("base_clock_mhz must be > 0");

  std::set<std::string, std::less<>> names;
  for (const Task& t : dfg.tasks) {
    const std::string where = "task '" + t.name + "': ";
    if (t.name.empty()) invalid("task with empty name");
    if (!names.insert(t.name).second) invalid("duplicate task name '" + t.name + "'");
    if (t.f_max_mhz <= 0) invalid(where + "f_max_mhz must be > 0");
    if (t.n_op_dsp < 0) invalid(where + "n_op_dsp must be >= 0");
    if (t.n_op_mem < 0) invalid(where + "n_op_mem must be >= 0");
    if (t.base_partition_factor < 1) invalid(where + "base_partition_factor must be >= 1");
    if (t.ii_min_base && *t.ii_min_base < 1) invalid(where + "ii_min_base must be >= 1");
    if (t.pipeline_depth && *t.pipeline_depth < 1) invalid(where + "pipeline_depth must be >= 1");
    if (!t.ddg) {
      if (!t.ii_min_base) invalid(where + "ii_min_base is required without a ddg");
      if (!t.pipeline_depth) invalid(where + "pipeline_depth is required without a ddg");
      continue;
    }
    try {
      validate_ddg(*t.ddg);
    } catch (const Error& e) {
      throw Error(e.kind(), where + e.what());
    }
    if (t.ii_min_base && dfg.base_clock_mhz) {
      std::int64_t derived = min_ii(*t.ddg, *dfg.base_clock_mhz);
      if (derived != *t.ii_min_base) {
        throw Error(ErrorKind::CrossCheck,
                    where + "ii_min_base " + std::to_string(*t.ii_min_base) +
                        " disagrees with ddg-derived " + std::to_string(derived) + " at " +
                        to_string(*dfg.base_clock_mhz) + " MHz");
      }
    }
  }
  for (const Channel& c : dfg.channels) {
    const std::string where = "channel " + c.from + "->" + c.to + ": ";
    if (!names.contains(c.from)) invalid(where + "unknown task '" + c.from + "'");
    if (!names.contains(c.to)) invalid(where + "unknown task '" + c.to + "'");
    if (c.from == c.to) invalid(where + "self-loop");
    if (c.depth < 1) invalid(where + "depth must be >= 1");
  }
  auto cycle = find_channel_cycle(dfg);
  if (!cycle.empty()) {
    std::string path;
    for (std::size_t i = 0; i < cycle.size(); ++i) path += (i ? "->" : "") + cycle[i];
    invalid("channel graph must be acyclic (channel cycle: " + path + ")");
  }
}

Dfg parse_dfg(std::string_view json_text) {
  json root = parse(json_text);
  expect_object(root, "<root>");
  reject_unknown(root,
                 {"description", "tasks", "channels", "device_dsp_total", "memory_bound_msps",
                  "base_clock_mhz"},
                 "<root>");
  Dfg dfg;
  if (auto it = root.find("description"); it != root.end()) {
    dfg.description = get_string(*it, "description");
  }
  const json& tasks = require(root, "tasks", "<root>");
  if (!tasks.is_array()) fail("tasks", "expected an array");
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    dfg.tasks.push_back(parse_task(tasks[i], "tasks[" + std::to_string(i) + "]"));
  }
  if (auto it = root.find("channels"); it != root.end()) {
    if (!it->is_array()) fail("channels", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& c = (*it)[i];
      std::string p = "channels[" + std::to_string(i) + "]";
      expect_object(c, p);
      reject_unknown(c, {"from", "to", "depth"}, p);
      Channel ch;
      ch.from = get_string(require(c, "from", p), child(p, "from"));
      ch.to = get_string(require(c, "to", p), child(p, "to"));
      if (auto d = c.find("depth"); d != c.end()) ch.depth = get_int(*d, child(p, "depth"));
      dfg.channels.push_back(std::move(ch));
    }
  }
  dfg.device_dsp_total =
      get_int(require(root, "device_dsp_total", "<root>"), "device_dsp_total");
  if (auto it = root.find("memory_bound_msps"); it != root.end() && !it->is_null()) {
    dfg.memory_bound_msps = get_rational(*it, "memory_bound_msps");
  }
  if (auto it = root.find("base_clock_mhz"); it != root.end() && !it->is_null()) {
    dfg.base_clock_mhz = get_rational(*it, "base_clock_mhz");
  }
  validate_dfg(dfg);
  return dfg;
}

Dfg load_dfg(const std::filesystem::path& path) {
  std::string text = read_text_file(path);
  try {
    return parse_dfg(text);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::string dump_dfg(const Dfg& dfg) {
  ordered_json root;
  if (!dfg.description.empty()) root["description"] = dfg.description;
  ordered_json tasks = ordered_json::array();
  for (const Task& t : dfg.tasks) {
    ordered_json jt;
    jt["name"] = t.name;
    jt["n_op_dsp"] = t.n_op_dsp;
    jt["n_op_mem"] = t.n_op_mem;
    jt["base_partition_factor"] = t.base_partition_factor;
    jt["f_max_mhz"] = to_json(t.f_max_mhz);
    if (t.ii_min_base) jt["ii_min_base"] = *t.ii_min_base;
    if (t.pipeline_depth) jt["pipeline_depth"] = *t.pipeline_depth;
    if (t.ddg) jt["ddg"] = ddg_to_json(*t.ddg);
    tasks.push_back(std::move(jt));
  }
  root["tasks"] = std::move(tasks);
  ordered_json channels = ordered_json::array();
  for (const Channel& c : dfg.channels) {
    channels.push_back({{"from", c.from}, {"to", c.to}, {"depth", c.depth}});
  }
  root["channels"] = std::move(channels);
  root["device_dsp_total"] = dfg.device_dsp_total;
  if (dfg.memory_bound_msps) root["memory_bound_msps"] = to_json(*dfg.memory_bound_msps);
  if (dfg.base_clock_mhz) root["base_clock_mhz"] = to_json(*dfg.base_clock_mhz);
  return root.dump(2) + "\n";
}

void save_dfg(const Dfg& dfg, const std::filesystem::path& path) {
  write_text_file(path, dump_dfg(dfg));
}

Characterization parse_characterization(std::string_view json_text) {
  json root = parse(json_text);
  expect_object(root, "<root>");
  Characterization ch;
  for (const auto& [name, v] : root.items()) {
    expect_object(v, name);
    reject_unknown(v, {"f_max_mhz", "n_op_dsp"}, name);
    TaskCharacterization tc;
    tc.f_max_mhz = get_rational(require(v, "f_max_mhz", name), child(name, "f_max_mhz"));
    tc.n_op_dsp = get_int(require(v, "n_op_dsp", name), child(name, "n_op_dsp"));
    if (tc.f_max_mhz <= 0) invalid(name + ": f_max_mhz must be > 0");
    if (tc.n_op_dsp < 0) invalid(name + ": n_op_dsp must be >= 0");
    ch.emplace(name, tc);
  }
  return ch;
}

Characterization load_characterization(const std::filesystem::path& path) {
  std::string text = read_text_file(path);
  try {
    return parse_characterization(text);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

Dfg merge_characterization(const Dfg& dfg, const Characterization& ch) {
  Dfg merged = dfg;
  for (const auto& [name, tc] : ch) {
    auto idx = merged.find_task(name);
    if (!idx) throw Error(ErrorKind::UnknownTask, "unknown task '" + name + "'");
    if (tc.f_max_mhz <= 0 || tc.n_op_dsp < 0) {
      invalid("characterization of '" + name + "' out of range");
    }
    merged.tasks[*idx].f_max_mhz = tc.f_max_mhz;
    merged.tasks[*idx].n_op_dsp = tc.n_op_dsp;
  }
  return merged;
}

std::vector<std::size_t> topological_order(const Dfg& dfg) {
  const std::size_t n = dfg.tasks.size();
  std::vector<std::size_t> indegree(n, 0);
  std::vector<std::vector<std::size_t>> succ(n);
  for (const Channel& c : dfg.channels) {
    std::size_t from = *dfg.find_task(c.from);
    std::size_t to = *dfg.find_task(c.to);
    succ[from].push_back(to);
    ++indegree[to];
  }
  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.insert(i);
  }
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    std::size_t u = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(u);
    for (std::size_t v : succ[u]) {
      if (--indegree[v] == 0) ready.insert(v);
    }
  }
  if (order.size() != n) invalid("channel graph must be acyclic");
  return order;
}

std::int64_t task_ii_min(const Task& task, const Rational& f_mhz) {
  if (task.ddg) return min_ii(*task.ddg, f_mhz);
  return *task.ii_min_base;
}

std::int64_t task_pipeline_depth(const Task& task, const Rational& f_mhz) {
  if (task.pipeline_depth) return *task.pipeline_depth;
  return pipeline_depth(*task.ddg, f_mhz);
}

Rational min_f_max(const Dfg& dfg) {
  Rational lowest = dfg.tasks.front().f_max_mhz;
  for (const Task& t : dfg.tasks) lowest = std::min(lowest, t.f_max_mhz);
  return lowest;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for '" + path.string() + "'");
}

}  // namespace pumpwise
