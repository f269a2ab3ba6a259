#pragma once

// Minimum initiation interval of a pipelined loop body from its
// data-dependence graph.
//
// Latency model: no operator chaining, every operation occupies at least one
// cycle, latency = max(1, ceil(delay / period)). The II bound is the maximum
// cycle ratio sum(latency) / sum(distance) over the recurrences of the DDG,
// rounded up to an integer. The II never grows to meet a clock target; clock
// feasibility is expressed only through a task's f_max.

#include <cstdint>
#include <string>
#include <vector>

#include "pumpwise/rational.hpp"

namespace pumpwise {

struct Op {
  std::string id;
  std::string op_class;  // mul, add, load, store, ...
  Rational delay_ns;

  bool operator==(const Op&) const = default;
};

struct Dep {
  std::string from;
  std::string to;
  std::int64_t dist = 0;  // loop-carried distance in iterations

  bool operator==(const Dep&) const = default;
};

struct Ddg {
  std::vector<Op> ops;
  std::vector<Dep> deps;

  bool operator==(const Ddg&) const = default;
};

/// Throws Error(Validation) for duplicate ids, dangling deps, non-positive
/// delays or negative distances, and for a zero-distance cycle
/// ("combinational cycle").
void validate_ddg(const Ddg& ddg);

std::int64_t op_latency_cycles(const Rational& delay_ns, const Rational& f_mhz);

/// max(1, ceil(max cycle ratio)). Returns 1 for acyclic DDGs.
std::int64_t min_ii(const Ddg& ddg, const Rational& f_mhz);

/// Exact maximum cycle ratio (sum latency / sum dist); 0 when acyclic.
Rational max_cycle_ratio(const Ddg& ddg, const Rational& f_mhz);

/// A cycle attaining the maximum ratio, rotated to start at its smallest id.
/// Among critical cycles the lexicographically smallest id sequence wins.
/// Throws Error(Precondition) "acyclic" when the DDG has no cycle.
std::vector<std::string> critical_cycle(const Ddg& ddg, const Rational& f_mhz);

/// Longest latency-weighted path over intra-iteration (dist 0) edges.
std::int64_t pipeline_depth(const Ddg& ddg, const Rational& f_mhz);

/// True when no cycle has sum(latency) - ii * sum(dist) > 0.
bool ii_feasible(const Ddg& ddg, const Rational& f_mhz, std::int64_t ii);

}  // namespace pumpwise
