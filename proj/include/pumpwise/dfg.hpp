#pragma once

// Dataflow graph model: tasks connected by FIFO channels, one token per
// firing on every channel, plus per-task characterization (DSP operation
// count and maximum implementable clock).

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pumpwise/ii_engine.hpp"
#include "pumpwise/rational.hpp"

namespace pumpwise {

inline constexpr std::int64_t kDefaultFifoDepth = 2;

struct Task {
  std::string name;
  std::int64_t n_op_dsp = 0;   // DSP-mapped operations per iteration
  std::int64_t n_op_mem = 0;   // memory operations per iteration
  std::int64_t base_partition_factor = 1;
  Rational f_max_mhz;
  std::optional<Ddg> ddg;
  std::optional<std::int64_t> ii_min_base;     // required without a DDG
  std::optional<std::int64_t> pipeline_depth;  // required without a DDG

  bool operator==(const Task&) const = default;
};

struct Channel {
  std::string from;
  std::string to;
  std::int64_t depth = kDefaultFifoDepth;

  bool operator==(const Channel&) const = default;
};

struct Dfg {
  std::string description;
  std::vector<Task> tasks;
  std::vector<Channel> channels;
  std::int64_t device_dsp_total = 0;
  std::optional<Rational> memory_bound_msps;
  // Clock at which a declared ii_min_base is cross-checked against the DDG.
  std::optional<Rational> base_clock_mhz;

  bool operator==(const Dfg&) const = default;

  const Task& task(std::string_view name) const;
  std::optional<std::size_t> find_task(std::string_view name) const;
};

struct TaskCharacterization {
  Rational f_max_mhz;
  std::int64_t n_op_dsp = 0;

  bool operator==(const TaskCharacterization&) const = default;
};

using Characterization = std::map<std::string, TaskCharacterization, std::less<>>;

/// Throws Error(Validation) naming the first violated invariant, or
/// Error(CrossCheck) when a declared ii_min_base disagrees with the DDG.
void validate_dfg(const Dfg& dfg);

Dfg parse_dfg(std::string_view json_text);
Dfg load_dfg(const std::filesystem::path& path);
std::string dump_dfg(const Dfg& dfg);
void save_dfg(const Dfg& dfg, const std::filesystem::path& path);

Characterization parse_characterization(std::string_view json_text);
Characterization load_characterization(const std::filesystem::path& path);

/// Overwrites f_max_mhz and n_op_dsp of the named tasks.
Dfg merge_characterization(const Dfg& dfg, const Characterization& ch);

/// Task indices in a topological order of the channel graph (stable: ties
/// keep file order). Requires an acyclic graph.
std::vector<std::size_t> topological_order(const Dfg& dfg);

/// Minimum II at clock f: from the DDG when present, else the declared value.
std::int64_t task_ii_min(const Task& task, const Rational& f_mhz);

/// Pipeline depth at clock f: declared value, else derived from the DDG.
std::int64_t task_pipeline_depth(const Task& task, const Rational& f_mhz);

Rational min_f_max(const Dfg& dfg);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace pumpwise
