#pragma once

// Discrete-event simulator for multi-clock dataflow graphs.
//
// Every task is a pipelined actor in its own clock domain (period rounded to
// the nearest picosecond, first edge at t = 0). On a local edge a task starts
// an iteration when at least II local cycles passed since its previous start,
// each input FIFO holds a token and each output has a free credit. Inputs are
// popped at start; the output credit is taken at start and the token is
// written pipeline_depth local cycles later. A producer owns FIFO depth plus
// ceil(pipeline_depth / II) credits per output: a token completing into a
// full FIFO waits in the producer's output stage and is written by the next
// pop, so occupancy never exceeds the FIFO depth. FIFOs are dual-clock and
// ideal: a push or pop is visible to the other side at the same instant.
//
// Events at equal time are ordered: completions first, then start attempts
// from downstream to upstream tasks (reverse topological order), so a slot
// freed by a consumer can be refilled by its producer on the same edge.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pumpwise/dfg.hpp"
#include "pumpwise/plan.hpp"
#include "pumpwise/rational.hpp"

namespace pumpwise {

struct SimConfig {
  std::int64_t iterations = 10000;
  std::optional<std::int64_t> warmup;  // default_warmup() when unset
  std::ostream* trace = nullptr;       // CSV time_ps,task,kind,iteration
};

struct ChannelStats {
  std::string from;
  std::string to;
  std::int64_t depth = 0;
  std::int64_t peak_occupancy = 0;
  std::int64_t pushed = 0;
  std::int64_t popped = 0;
  std::int64_t residual = 0;  // tokens left in the FIFO
  std::int64_t held = 0;      // tokens left in the producer output stage

  bool operator==(const ChannelStats&) const = default;
};

struct TaskStats {
  std::string name;
  std::int64_t period_ps = 0;
  std::int64_t pipeline_depth = 0;
  std::int64_t firings = 0;

  bool operator==(const TaskStats&) const = default;
};

struct SimReport {
  Rational throughput_msps;
  std::int64_t warmup = 0;
  std::int64_t end_time_ps = 0;
  std::int64_t events = 0;
  bool stalled = false;
  std::string stall_task;  // last task that made progress
  std::int64_t stall_time_ps = 0;
  std::vector<ChannelStats> channels;
  std::vector<TaskStats> tasks;

  bool operator==(const SimReport&) const = default;
};

/// round(1e6 / f_mhz). Throws Error(Precondition) when the period would be
/// zero (f above 1e6 MHz).
std::int64_t clock_period_ps(const Rational& f_mhz);

/// max(100, 10 * max pipeline depth), capped at iterations / 2.
std::int64_t default_warmup(const Dfg& dfg, const PumpPlan& plan, std::int64_t iterations);

SimReport simulate(const Dfg& dfg, const PumpPlan& plan, const SimConfig& cfg);

/// Analytic compute throughput (no memory clamp), min over tasks of f / II.
Rational analytic_throughput(const Dfg& dfg, const PumpPlan& plan);

/// |simulated - analytic| / analytic, with the analytic value excluding the
/// memory bound since the simulator models compute only.
double validate_plan_throughput(const Dfg& dfg, const PumpPlan& plan, const SimConfig& cfg);

double relative_error(const Rational& measured, const Rational& reference);

/// Per-channel FIFO depth (same order as dfg.channels) that lets every plan
/// run at its analytic rate: on reconvergent paths a token that arrives early
/// at a join waits for its partner, so the channel must hold the latency
/// difference times the throughput, plus min_depth. Channels already deeper
/// keep their depth.
std::vector<std::int64_t> balanced_fifo_depths(const Dfg& dfg, const std::vector<PumpPlan>& plans,
                                               std::int64_t min_depth = kDefaultFifoDepth);

}  // namespace pumpwise
