#include "pumpwise/sim.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>

#include "pumpwise/error.hpp"
#include "pumpwise/planner.hpp"

namespace pumpwise {

namespace {

enum class EventKind : int { Complete = 0, Attempt = 1 };

struct Event {
  std::int64_t time;
  EventKind kind;
  std::size_t rank;  // position in downstream-first order
  std::uint64_t seq;
  std::size_t task;
  std::int64_t iteration;

  bool operator>(const Event& o) const {
    return std::tie(time, kind, rank, seq) > std::tie(o.time, o.kind, o.rank, o.seq);
  }
};

struct Fifo {
  std::size_t producer;
  std::size_t consumer;
  std::int64_t depth;
  std::int64_t occupancy = 0;
  std::int64_t reserved = 0;  // iterations in flight towards this FIFO
  std::int64_t held = 0;      // completed, waiting in the producer's output stage
  std::int64_t credits = 0;   // depth + producer pipeline capacity
  std::int64_t peak = 0;
  std::int64_t pushed = 0;
  std::int64_t popped = 0;
};

struct Actor {
  std::int64_t period = 1;
  std::int64_t ii = 1;
  std::int64_t depth = 1;
  std::size_t rank = 0;
  std::vector<std::size_t> inputs;
  std::vector<std::size_t> outputs;
  std::int64_t started = 0;
  std::optional<std::int64_t> last_start_edge;
  bool attempt_pending = false;
};

class Simulation {
 public:
  Simulation(const Dfg& dfg, const PumpPlan& plan, const SimConfig& cfg)
      : dfg_(dfg), cfg_(cfg) {
    for (const Task& task : dfg.tasks) {
      const TaskPlan& tp = plan.at(task.name);
      Actor a;
      a.period = clock_period_ps(tp.f_mhz);
      a.ii = tp.ii;
      a.depth = task_pipeline_depth(task, tp.f_mhz);
      actors_.push_back(std::move(a));
    }
    for (const Channel& c : dfg.channels) {
      std::size_t from = *dfg.find_task(c.from);
      std::size_t to = *dfg.find_task(c.to);
      actors_[from].outputs.push_back(fifos_.size());
      actors_[to].inputs.push_back(fifos_.size());
      const Actor& p = actors_[from];
      Fifo q{from, to, c.depth};
      q.credits = c.depth + (p.depth + p.ii - 1) / p.ii;
      fifos_.push_back(q);
    }
    auto order = topological_order(dfg);
    for (std::size_t i = 0; i < order.size(); ++i) {
      actors_[order[i]].rank = order.size() - 1 - i;
    }
    for (std::size_t t = 0; t < actors_.size(); ++t) {
      if (actors_[t].outputs.empty()) sink_times_.emplace_back(t, std::vector<std::int64_t>{});
    }
  }

  SimReport run() {
    for (std::size_t t = 0; t < actors_.size(); ++t) schedule_attempt(t, 0);
    SimReport report;
    while (!queue_.empty()) {
      Event ev = queue_.top();
      queue_.pop();
      ++report.events;
      now_ = ev.time;
      if (ev.kind == EventKind::Complete) {
        complete(ev.task, ev.iteration);
      } else {
        attempt(ev.task);
      }
    }
    report.end_time_ps = now_;
    fill_stats(report);
    finish_measurement(report);
    return report;
  }

 private:
  void push(Event ev) {
    ev.seq = seq_++;
    queue_.push(ev);
  }

  void schedule_attempt(std::size_t t, std::int64_t not_before) {
    Actor& a = actors_[t];
    if (a.attempt_pending || a.started >= cfg_.iterations) return;
    std::int64_t edge = (not_before + a.period - 1) / a.period;
    if (a.last_start_edge) edge = std::max(edge, *a.last_start_edge + a.ii);
    a.attempt_pending = true;
    push(Event{edge * a.period, EventKind::Attempt, a.rank, 0, t, 0});
  }

  void attempt(std::size_t t) {
    Actor& a = actors_[t];
    a.attempt_pending = false;
    if (a.started >= cfg_.iterations) return;
    for (std::size_t f : a.inputs) {
      if (fifos_[f].occupancy < 1) return;  // woken by the next push
    }
    for (std::size_t f : a.outputs) {
      const Fifo& q = fifos_[f];
      if (q.occupancy + q.reserved + q.held >= q.credits) return;  // woken by the next pop
    }
    const std::int64_t iteration = a.started++;
    a.last_start_edge = now_ / a.period;
    progress(t);
    trace(t, "start", iteration);
    for (std::size_t f : a.inputs) {
      Fifo& q = fifos_[f];
      --q.occupancy;
      ++q.popped;
      if (q.held > 0) {
        --q.held;
        deliver(q);
      }
      schedule_attempt(q.producer, now_);
    }
    for (std::size_t f : a.outputs) ++fifos_[f].reserved;
    if (a.outputs.empty()) {
      for (auto& [sink, times] : sink_times_) {
        if (sink == t) times.push_back(now_);
      }
    } else {
      push(Event{now_ + a.depth * a.period, EventKind::Complete, a.rank, 0, t, iteration});
    }
    schedule_attempt(t, now_ + a.period);
  }

  void complete(std::size_t t, std::int64_t iteration) {
    progress(t);
    trace(t, "complete", iteration);
    for (std::size_t f : actors_[t].outputs) {
      Fifo& q = fifos_[f];
      --q.reserved;
      if (q.occupancy < q.depth) {
        deliver(q);
      } else {
        ++q.held;
      }
    }
  }

  void deliver(Fifo& q) {
    ++q.occupancy;
    ++q.pushed;
    q.peak = std::max(q.peak, q.occupancy);
    schedule_attempt(q.consumer, now_);
  }

  void progress(std::size_t t) {
    last_task_ = t;
    last_time_ = now_;
  }

  void trace(std::size_t t, const char* kind, std::int64_t iteration) {
    if (!cfg_.trace) return;
    *cfg_.trace << now_ << ',' << dfg_.tasks[t].name << ',' << kind << ',' << iteration << '\n';
  }

  void fill_stats(SimReport& report) const {
    for (std::size_t f = 0; f < fifos_.size(); ++f) {
      const Fifo& q = fifos_[f];
      report.channels.push_back(ChannelStats{dfg_.channels[f].from, dfg_.channels[f].to, q.depth,
                                             q.peak, q.pushed, q.popped, q.occupancy, q.held});
    }
    for (std::size_t t = 0; t < actors_.size(); ++t) {
      const Actor& a = actors_[t];
      report.tasks.push_back(TaskStats{dfg_.tasks[t].name, a.period, a.depth, a.started});
    }
  }

  void finish_measurement(SimReport& report) const {
    const std::int64_t n = cfg_.iterations;
    const std::int64_t w = *cfg_.warmup;
    report.warmup = w;
    for (const auto& [sink, times] : sink_times_) {
      if (static_cast<std::int64_t>(times.size()) < n) {
        report.stalled = true;
        report.stall_task = dfg_.tasks[last_task_].name;
        report.stall_time_ps = last_time_;
        report.throughput_msps = 0;
        return;
      }
    }
    // Token k leaves the graph once every sink has consumed it.
    auto consumed = [&](std::int64_t k) {  // 1-based; t_0 = 0
      std::int64_t t = 0;
      if (k == 0) return t;
      for (const auto& [sink, times] : sink_times_) t = std::max(t, times[k - 1]);
      return t;
    };
    const std::int64_t span = consumed(n) - consumed(w);
    report.throughput_msps = Rational((n - w) * 1'000'000, span);
  }

  const Dfg& dfg_;
  const SimConfig& cfg_;
  std::vector<Actor> actors_;
  std::vector<Fifo> fifos_;
  std::vector<std::pair<std::size_t, std::vector<std::int64_t>>> sink_times_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
  std::uint64_t seq_ = 0;
  std::int64_t now_ = 0;
  std::size_t last_task_ = 0;
  std::int64_t last_time_ = 0;
};

}  // namespace

std::int64_t clock_period_ps(const Rational& f_mhz) {
  if (f_mhz <= 0) throw Error(ErrorKind::Precondition, "clock frequency must be > 0");
  std::int64_t period = floor_div(Rational(1'000'000) / f_mhz + Rational(1, 2));
  if (f_mhz > 1'000'000 || period < 1) {
    throw Error(ErrorKind::Precondition,
                "zero-period clock: " + to_string(f_mhz) + " MHz is beyond 1 ps resolution");
  }
  return period;
}

std::int64_t default_warmup(const Dfg& dfg, const PumpPlan& plan, std::int64_t iterations) {
  std::int64_t deepest = 1;
  for (const Task& task : dfg.tasks) {
    deepest = std::max(deepest, task_pipeline_depth(task, plan.at(task.name).f_mhz));
  }
  return std::min(std::max<std::int64_t>(100, 10 * deepest), iterations / 2);
}

SimReport simulate(const Dfg& dfg, const PumpPlan& plan, const SimConfig& cfg) {
  validate_plan(dfg, plan);
  if (cfg.iterations < 1) throw Error(ErrorKind::Precondition, "iterations must be >= 1");
  SimConfig resolved = cfg;
  if (!resolved.warmup) resolved.warmup = default_warmup(dfg, plan, cfg.iterations);
  if (*resolved.warmup < 0 || *resolved.warmup >= resolved.iterations) {
    throw Error(ErrorKind::Precondition, "warmup must satisfy 0 <= warmup < iterations");
  }
  for (const Channel& c : dfg.channels) {
    if (c.depth < 1) throw Error(ErrorKind::Precondition, "channel depth must be >= 1");
  }
  return Simulation(dfg, plan, resolved).run();
}

Rational analytic_throughput(const Dfg& dfg, const PumpPlan& plan) {
  return compute_throughput(dfg, plan);
}

double relative_error(const Rational& measured, const Rational& reference) {
  double ref = to_double(reference);
  return std::abs(to_double(measured) - ref) / ref;
}

std::vector<std::int64_t> balanced_fifo_depths(const Dfg& dfg, const std::vector<PumpPlan>& plans,
                                               std::int64_t min_depth) {
  std::vector<std::int64_t> depths;
  for (const Channel& c : dfg.channels) depths.push_back(std::max(c.depth, min_depth));
  const auto order = topological_order(dfg);
  for (const PumpPlan& plan : plans) {
    validate_plan(dfg, plan);
    // Worst-case time (ns) from a token entering the graph to it leaving task
    // i: pipeline fill plus one II of edge alignment.
    std::vector<Rational> latency(dfg.tasks.size());
    std::vector<Rational> ready(dfg.tasks.size(), Rational(0));
    for (std::size_t i = 0; i < dfg.tasks.size(); ++i) {
      const TaskPlan& tp = plan.at(dfg.tasks[i].name);
      latency[i] = Rational(task_pipeline_depth(dfg.tasks[i], tp.f_mhz) + tp.ii) * 1000 / tp.f_mhz;
    }
    for (std::size_t v : order) {
      for (const Channel& c : dfg.channels) {
        if (c.to != dfg.tasks[v].name) continue;
        std::size_t u = *dfg.find_task(c.from);
        ready[v] = std::max(ready[v], ready[u] + latency[u]);
      }
    }
    const Rational rate = compute_throughput(dfg, plan);
    for (std::size_t e = 0; e < dfg.channels.size(); ++e) {
      std::size_t u = *dfg.find_task(dfg.channels[e].from);
      std::size_t v = *dfg.find_task(dfg.channels[e].to);
      Rational slack = ready[v] - ready[u] - latency[u];
      depths[e] = std::max(depths[e], min_depth + ceil_div(slack * rate / 1000));
    }
  }
  return depths;
}

double validate_plan_throughput(const Dfg& dfg, const PumpPlan& plan, const SimConfig& cfg) {
  SimReport report = simulate(dfg, plan, cfg);
  return relative_error(report.throughput_msps, analytic_throughput(dfg, plan));
}

}  // namespace pumpwise
