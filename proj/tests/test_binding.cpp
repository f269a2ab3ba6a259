#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "pumpwise/binding.hpp"
#include "pumpwise/error.hpp"
#include "pumpwise/planner.hpp"

using namespace pumpwise;

namespace {

const std::filesystem::path kData = PUMPWISE_DATA_DIR;

PumpPlan filter_plan(const Dfg& dfg, std::int64_t m) {
  PumpPlan plan = make_plan(dfg, Rational(165), Strategy::Base);
  for (TaskPlan& t : plan.tasks) {
    if (t.name == "Filter2D") {
      t.m = m;
      t.f_mhz = Rational(165) * m;
      t.ii = m;
    }
  }
  return plan;
}

}  // namespace

TEST_CASE("functional unit counts") {
  CHECK(fu_count(225, 1) == 225);
  CHECK(fu_count(225, 2) == 113);
  CHECK(fu_count(4, 2) == 2);
  CHECK(fu_count(0, 5) == 0);
}

TEST_CASE("pumped DSP constraint and partition scaling") {
  CHECK(dsp_constraint(225, 3) == 75);
  CHECK(dsp_constraint(225, 1) == 225);
  CHECK(dsp_constraint(1, 4) == 1);
  CHECK(scaled_partition(8, 2) == 4);
  CHECK(scaled_partition(8, 3) == 3);
  CHECK(scaled_partition(1, 5) == 1);
}

TEST_CASE("sharing properties hold over a grid") {
  for (std::int64_t n = 0; n <= 600; n += 7) {
    for (std::int64_t ii = 1; ii <= 16; ++ii) {
      CAPTURE(n);
      CAPTURE(ii);
      CHECK(fu_count(n, ii) * ii >= n);
      CHECK(fu_count(n, ii) <= n);
      if (ii >= 2) CHECK(fu_count(n, ii) <= fu_count(n, ii - 1));
      CHECK(dsp_constraint(n, ii) == fu_count(n, ii));
    }
    CHECK(fu_count(n, 1) == n);
    if (n >= 1) CHECK(fu_count(n, n) == 1);
  }
}

TEST_CASE("conv2d binding for pumping factors 1 to 3") {
  Dfg dfg = load_dfg(kData / "conv2d.json");
  BindingResult base = bind(dfg, filter_plan(dfg, 1));
  CHECK(base.total_dsp == 225);
  CHECK(base.dsp_pct == Rational(125, 2));

  BindingResult doubled = bind(dfg, filter_plan(dfg, 2));
  CHECK(doubled.total_dsp == 113);
  CHECK(to_double(doubled.dsp_pct) == doctest::Approx(31.39).epsilon(0.0005));

  BindingResult tripled = bind(dfg, filter_plan(dfg, 3));
  CHECK(tripled.total_dsp == 75);
  CHECK(to_double(tripled.dsp_pct) == doctest::Approx(20.83).epsilon(0.0005));

  for (const TaskBinding& t : tripled.tasks) {
    if (t.name == "Window2D") {
      CHECK(t.n_mem_ports == 15);
      CHECK(t.partition_factor == 15);
    }
  }
}

TEST_CASE("bind totals and maximal sharing on random graphs") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    Dfg dfg = oracle::random_dfg(rng, {});
    PumpPlan plan = make_plan(dfg, min_f_max(dfg), Strategy::Base);
    for (TaskPlan& t : plan.tasks) t.ii = 1;
    std::int64_t sum = 0;
    for (const Task& t : dfg.tasks) sum += t.n_op_dsp;
    BindingResult r = bind(dfg, plan);
    CHECK(r.total_dsp == sum);
    CHECK(r.dsp_pct == Rational(100 * sum, dfg.device_dsp_total));

    // Pumping each DSP task by its own op count leaves one unit.
    for (std::size_t k = 0; k < dfg.tasks.size(); ++k) {
      if (dfg.tasks[k].n_op_dsp > 0) {
        plan.tasks[k].m = dfg.tasks[k].n_op_dsp;
        plan.tasks[k].ii = dfg.tasks[k].n_op_dsp;
      }
    }
    for (const TaskBinding& t : bind(dfg, plan).tasks) {
      CHECK(t.n_fu_dsp <= 1);
      CHECK(t.partition_factor >= 1);
    }
  }
}

TEST_CASE("bind rejects a plan for another graph") {
  Dfg dfg = load_dfg(kData / "conv2d.json");
  PumpPlan plan = make_plan(dfg, Rational(165), Strategy::Base);
  plan.tasks.pop_back();
  CHECK_THROWS_AS(bind(dfg, plan), Error);
  plan = make_plan(dfg, Rational(165), Strategy::Base);
  plan.tasks[0].name = "Other";
  CHECK_THROWS_AS(bind(dfg, plan), Error);
}
