#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "pumpwise/binding.hpp"
#include "pumpwise/error.hpp"
#include "pumpwise/planner.hpp"

using namespace pumpwise;

namespace {

const std::filesystem::path kData = PUMPWISE_DATA_DIR;

const SweepRow& row_at(const std::vector<SweepRow>& rows, const Rational& f) {
  for (const SweepRow& r : rows) {
    if (r.f_base_mhz == f) return r;
  }
  FAIL("no row at " << to_string(f));
  return rows.front();
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Io;
}

Dfg no_dsp_chain() {
  Dfg dfg;
  dfg.device_dsp_total = 100;
  for (const char* name : {"a", "b", "c"}) {
    Task t;
    t.name = name;
    t.f_max_mhz = Rational(300);
    t.ii_min_base = 1;
    t.pipeline_depth = 2;
    dfg.tasks.push_back(t);
  }
  dfg.channels = {{"a", "b", 2}, {"b", "c", 2}};
  return dfg;
}

}  // namespace

TEST_CASE("task throughput is f over II") {
  CHECK(task_throughput(Rational(500), 2) == Rational(250));
  CHECK(task_throughput(Rational(250), 1) == Rational(250));
  CHECK(task_throughput(Rational(100), 1) == Rational(100));
}

TEST_CASE("graph throughput takes the bottleneck and the memory bound") {
  Dfg conv = load_dfg(kData / "conv2d.json");
  CHECK(graph_throughput(conv, make_plan(conv, Rational(250), Strategy::MPump)) == Rational(250));

  Dfg optical = load_dfg(kData / "optical.json");
  REQUIRE(optical.memory_bound_msps);
  CHECK(*optical.memory_bound_msps == Rational(175));
  PumpPlan at200 = make_plan(optical, Rational(200), Strategy::Base);
  CHECK(compute_throughput(optical, at200) == Rational(200));
  CHECK(graph_throughput(optical, at200) == Rational(175));

  Dfg single = no_dsp_chain();
  single.tasks.resize(1);
  single.channels.clear();
  PumpPlan p = make_plan(single, Rational(120), Strategy::Base);
  p.tasks[0].ii = 3;
  CHECK(graph_throughput(single, p) == Rational(40));
}

TEST_CASE("maximum pumping factors") {
  CHECK(m_max(Rational(500), Rational(165), 225) == 3);
  CHECK(m_max(Rational(500), Rational(250), 225) == 2);
  CHECK(m_max(Rational(800), Rational(100), 3) == 3);
  CHECK(m_max(Rational(800), Rational(100), 0) == 1);
  CHECK(kind_of([] { m_max(Rational(500), Rational(600), 225); }) == ErrorKind::Infeasible);
  CHECK_THROWS_WITH(m_max(Rational(500), Rational(600), 225),
                    doctest::Contains("base clock infeasible"));

  Dfg conv = load_dfg(kData / "conv2d.json");
  CHECK(s_max(conv, Rational(165)) == 2);
  CHECK(s_max(conv, Rational(330)) == 1);
  CHECK(s_max(conv, Rational(165) + Rational(1, 100)) == 1);
  CHECK(kind_of([&] { s_max(conv, Rational(331)); }) == ErrorKind::Infeasible);
}

TEST_CASE("conv2d plans at 165 MHz use factors 3 and 2") {
  Dfg conv = load_dfg(kData / "conv2d.json");
  PumpPlan m = make_plan(conv, Rational(165), Strategy::MPump);
  CHECK(m.at("Filter2D") == TaskPlan{"Filter2D", 3, Rational(495), 3});
  CHECK(m.at("Window2D") == TaskPlan{"Window2D", 1, Rational(165), 1});

  PumpPlan s = make_plan(conv, Rational(165), Strategy::SPump);
  for (const TaskPlan& t : s.tasks) CHECK(t.f_mhz == Rational(330));
  CHECK(s.at("Filter2D").ii == 2);
  CHECK(s.at("Filter2D").m == 2);
  CHECK(s.at("ReadFromMem").ii == 1);
  CHECK(bind(conv, s).total_dsp == 113);

  CHECK(kind_of([&] { make_plan(conv, Rational(600), Strategy::Base); }) ==
        ErrorKind::Infeasible);
}

TEST_CASE("plans degenerate to base at f_base = min f_max") {
  for (const char* name : {"conv2d.json", "optical.json", "vms.json"}) {
    CAPTURE(name);
    Dfg dfg = load_dfg(kData / name);
    Rational top = min_f_max(dfg);
    PumpPlan base = make_plan(dfg, top, Strategy::Base);
    PumpPlan s = make_plan(dfg, top, Strategy::SPump);
    s.strategy = Strategy::Base;
    CHECK(s == base);
  }
  Dfg conv = load_dfg(kData / "conv2d.json");
  PumpPlan base = make_plan(conv, Rational(330), Strategy::Base);
  PumpPlan m = make_plan(conv, Rational(330), Strategy::MPump);
  m.strategy = Strategy::Base;
  CHECK(m == base);
}

TEST_CASE("conv2d sweep DSP percentages at 165 and 250 MHz") {
  Dfg conv = load_dfg(kData / "conv2d.json");
  auto rows = sweep(conv, Rational(100), Rational(260), Rational(5));
  CHECK(rows.size() == 33);
  const SweepRow& low = row_at(rows, Rational(165));
  CHECK(low.pct_base == Rational(125, 2));
  CHECK(format_fixed(low.pct_s_pump, 2) == "31.39");
  CHECK(format_fixed(low.pct_m_pump, 2) == "20.83");
  const SweepRow& high = row_at(rows, Rational(250));
  CHECK(high.throughput_msps == Rational(250));
  CHECK(high.pct_base == Rational(125, 2));
  CHECK(high.pct_s_pump == Rational(125, 2));  // s-pump has degenerated to base
  CHECK(format_fixed(high.pct_m_pump, 2) == "31.39");
  CHECK(degeneration_clock(conv, Strategy::SPump) == Rational(165));
  CHECK(degeneration_clock(conv, Strategy::MPump) == Rational(250));
}

TEST_CASE("sweep edge cases") {
  Dfg conv = load_dfg(kData / "conv2d.json");
  CHECK(sweep(conv, Rational(200), Rational(200), Rational(5)).size() == 1);
  CHECK(sweep(conv, Rational(400), Rational(500), Rational(10)).empty());
  CHECK(sweep(conv, Rational(320), Rational(340), Rational(5)).size() == 3);
  CHECK(kind_of([&] { sweep(conv, Rational(200), Rational(100), Rational(5)); }) ==
        ErrorKind::Precondition);
  CHECK(kind_of([&] { sweep(conv, Rational(100), Rational(200), Rational(0)); }) ==
        ErrorKind::Precondition);

  for (const SweepRow& r : sweep(no_dsp_chain(), Rational(50), Rational(300), Rational(25))) {
    CHECK(r.dsp_base == 0);
    CHECK(r.dsp_s_pump == 0);
    CHECK(r.dsp_m_pump == 0);
  }
}

TEST_CASE("sweep invariants on shipped and random graphs") {
  std::vector<Dfg> graphs;
  for (const char* name : {"conv2d.json", "optical.json", "vms.json"}) {
    graphs.push_back(load_dfg(kData / name));
  }
  std::mt19937_64 rng(77);
  for (int i = 0; i < 60; ++i) graphs.push_back(oracle::random_dfg(rng, {}));

  for (const Dfg& dfg : graphs) {
    const Rational top = min_f_max(dfg);
    const Rational step = top / 40;
    auto rows = sweep(dfg, step, top, step);
    REQUIRE(rows.size() == 40);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const SweepRow& r = rows[k];
      CHECK(r.dsp_m_pump <= r.dsp_s_pump);
      CHECK(r.dsp_s_pump <= r.dsp_base);
      if (k > 0) {
        CHECK(rows[k - 1].f_base_mhz < r.f_base_mhz);
        CHECK(rows[k - 1].throughput_msps <= r.throughput_msps);
        CHECK(rows[k - 1].dsp_base <= r.dsp_base);
        CHECK(rows[k - 1].dsp_s_pump <= r.dsp_s_pump);
        CHECK(rows[k - 1].dsp_m_pump <= r.dsp_m_pump);
      }
      if (r.f_base_mhz > degeneration_clock(dfg, Strategy::SPump)) {
        CHECK(r.dsp_s_pump == r.dsp_base);
      }
      if (r.f_base_mhz > degeneration_clock(dfg, Strategy::MPump)) {
        CHECK(r.dsp_m_pump == r.dsp_base);
      } else {
        CHECK(r.dsp_m_pump < r.dsp_base);
      }
    }
    CHECK(degeneration_clock(dfg, Strategy::MPump) >= degeneration_clock(dfg, Strategy::SPump));
  }
}

TEST_CASE("pumping preserves analytic throughput and respects f_max") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 200; ++i) {
    Dfg dfg = oracle::random_dfg(rng, {});
    Rational f = oracle::random_feasible_base(rng, dfg);
    PumpPlan base = make_plan(dfg, f, Strategy::Base);
    PumpPlan s = make_plan(dfg, f, Strategy::SPump);
    PumpPlan m = make_plan(dfg, f, Strategy::MPump);
    CHECK(graph_throughput(dfg, s) == graph_throughput(dfg, base));
    CHECK(graph_throughput(dfg, m) == graph_throughput(dfg, base));
    for (std::size_t k = 0; k < dfg.tasks.size(); ++k) {
      const Task& t = dfg.tasks[k];
      CHECK(m.tasks[k].f_mhz <= t.f_max_mhz);
      CHECK(s.tasks[k].f_mhz <= t.f_max_mhz);
      CHECK(m.tasks[k].f_mhz == f * m.tasks[k].m);
      if (t.n_op_dsp > 0) CHECK(s.tasks[k].m <= m.tasks[k].m);
    }
  }
}
