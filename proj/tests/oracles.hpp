#pragma once

// Test-only reference computations. Nothing here calls into the code paths
// it is used to check.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pumpwise/dfg.hpp"
#include "pumpwise/ii_engine.hpp"
#include "pumpwise/rational.hpp"

namespace pumpwise::oracle {

/// Smallest k >= 1 with k * period >= delay, found by counting.
std::int64_t latency_by_counting(const Rational& delay_ns, const Rational& f_mhz);

struct CycleSearch {
  Rational best_ratio;                    // 0 when acyclic
  std::vector<std::string> best_cycle;    // lexicographically smallest critical cycle
  std::size_t cycles = 0;                 // simple cycles enumerated
};

/// Enumerates every simple cycle (edge sequences, so parallel deps count
/// separately) and keeps the maximum latency/dist ratio.
CycleSearch enumerate_cycles(const Ddg& ddg, const Rational& f_mhz);

/// Random DDG with `n_ops` ops; dist-0 edges only go forward in op order so
/// there is never a combinational cycle.
Ddg random_ddg(std::mt19937_64& rng, std::size_t n_ops);

struct DfgShape {
  std::size_t max_tasks = 8;
  std::int64_t max_dsp = 512;
  std::int64_t f_max_lo = 200;
  std::int64_t f_max_hi = 1000;
  std::int64_t max_pipeline_depth = 16;
  std::int64_t fifo_depth = 2;
};

/// Random chain, diamond or general DAG (chosen by the rng), connected,
/// single source and single sink, with every task's ii_min_base = 1 except
/// DSP tasks which may have 2.
Dfg random_dfg(std::mt19937_64& rng, const DfgShape& shape);

/// Random base clock in [min f_max / 6, min f_max], integer or half MHz.
Rational random_feasible_base(std::mt19937_64& rng, const Dfg& dfg);

/// Re-derives throughput from a simulator trace: sink start times only.
Rational throughput_from_trace(const std::string& trace_csv, const std::vector<std::string>& sinks,
                               std::int64_t iterations, std::int64_t warmup);

}  // namespace pumpwise::oracle
