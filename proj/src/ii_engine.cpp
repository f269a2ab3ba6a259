#include "pumpwise/ii_engine.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <queue>
#include <unordered_map>

#include "pumpwise/error.hpp"

namespace pumpwise {

namespace {

struct Edge {
  std::size_t from;
  std::size_t to;
  std::int64_t dist;
};

// Index-based view of a validated DDG with latencies quantized at one clock.
struct Graph {
  std::vector<std::int64_t> latency;
  std::vector<Edge> edges;

  std::size_t size() const { return latency.size(); }
};

std::unordered_map<std::string, std::size_t> index_ops(const Ddg& ddg) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < ddg.ops.size(); ++i) index.emplace(ddg.ops[i].id, i);
  return index;
}

Graph build_graph(const Ddg& ddg, const Rational& f_mhz) {
  validate_ddg(ddg);
  auto index = index_ops(ddg);
  Graph g;
  for (const auto& op : ddg.ops) g.latency.push_back(op_latency_cycles(op.delay_ns, f_mhz));
  for (const auto& dep : ddg.deps) {
    g.edges.push_back({index.at(dep.from), index.at(dep.to), dep.dist});
  }
  return g;
}

// Cycle weights are scale * latency(from) - ratio_num * dist, so a cycle is
// positive iff its latency/dist ratio exceeds ratio_num / scale.
struct Weights {
  std::int64_t scale;
  std::int64_t ratio_num;

  std::int64_t operator()(const Graph& g, const Edge& e) const {
    return scale * g.latency[e.from] - ratio_num * e.dist;
  }
};

// Any cycle in the predecessor graph of a relaxation sequence is positive.
std::optional<std::vector<std::size_t>> pred_cycle(
    const Graph& g, const std::vector<std::optional<std::size_t>>& pred) {
  const std::size_t n = g.size();
  std::vector<std::size_t> mark(n, 0);
  for (std::size_t s = 0; s < n; ++s) {
    std::size_t v = s;
    while (mark[v] == 0 && pred[v]) {
      mark[v] = s + 1;
      v = g.edges[*pred[v]].from;
    }
    if (mark[v] != s + 1) continue;
    std::vector<std::size_t> cycle;
    std::size_t u = v;
    do {
      std::size_t e = *pred[u];
      cycle.push_back(e);
      u = g.edges[e].from;
    } while (u != v);
    std::reverse(cycle.begin(), cycle.end());
    return cycle;
  }
  return std::nullopt;
}

// Longest-path Bellman-Ford from a virtual source linked to every node with
// weight 0. Returns a positive cycle (as edge indices) if one exists;
// otherwise leaves the converged potentials in `potential`.
std::optional<std::vector<std::size_t>> find_positive_cycle(
    const Graph& g, Weights w, std::vector<std::int64_t>& potential) {
  const std::size_t n = g.size();
  potential.assign(n, 0);
  std::vector<std::optional<std::size_t>> pred(n);
  for (std::size_t round = 0;; ++round) {
    bool relaxed = false;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      const Edge& edge = g.edges[e];
      std::int64_t candidate = potential[edge.from] + w(g, edge);
      if (candidate > potential[edge.to]) {
        potential[edge.to] = candidate;
        pred[edge.to] = e;
        relaxed = true;
      }
    }
    if (!relaxed) return std::nullopt;
    if (round + 1 >= n) {
      if (auto cycle = pred_cycle(g, pred)) return cycle;
    }
  }
}

bool feasible(const Graph& g, std::int64_t ii) {
  std::vector<std::int64_t> potential;
  return !find_positive_cycle(g, Weights{1, ii}, potential).has_value();
}

// Dinkelbach-style ascent: every positive cycle found at the current ratio
// has a strictly larger ratio, and there are finitely many cycles.
Rational max_ratio(const Graph& g, std::vector<std::int64_t>* potential_out) {
  Rational ratio(0);
  std::vector<std::int64_t> potential;
  while (auto cycle = find_positive_cycle(
             g, Weights{ratio.denominator(), ratio.numerator()}, potential)) {
    std::int64_t lat = 0;
    std::int64_t dist = 0;
    for (std::size_t e : *cycle) {
      lat += g.latency[g.edges[e].from];
      dist += g.edges[e].dist;
    }
    ratio = Rational(lat, dist);
  }
  if (potential_out) *potential_out = std::move(potential);
  return ratio;
}

}  // namespace

void validate_ddg(const Ddg& ddg) {
  if (ddg.ops.empty()) throw Error(ErrorKind::Validation, "ddg has no ops");
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < ddg.ops.size(); ++i) {
    const Op& op = ddg.ops[i];
    if (op.id.empty()) throw Error(ErrorKind::Validation, "ddg op with empty id");
    if (!index.emplace(op.id, i).second) {
      throw Error(ErrorKind::Validation, "duplicate ddg op id '" + op.id + "'");
    }
    if (op.delay_ns <= 0) {
      throw Error(ErrorKind::Validation, "ddg op '" + op.id + "': delay_ns must be > 0");
    }
  }
  std::vector<std::vector<std::size_t>> comb(ddg.ops.size());
  std::vector<std::size_t> indegree(ddg.ops.size(), 0);
  for (const Dep& dep : ddg.deps) {
    auto from = index.find(dep.from);
    auto to = index.find(dep.to);
    if (from == index.end() || to == index.end()) {
      throw Error(ErrorKind::Validation,
                  "ddg dep " + dep.from + "->" + dep.to + " names an unknown op");
    }
    if (dep.dist < 0) {
      throw Error(ErrorKind::Validation,
                  "ddg dep " + dep.from + "->" + dep.to + ": dist must be >= 0");
    }
    if (dep.dist == 0) {
      comb[from->second].push_back(to->second);
      ++indegree[to->second];
    }
  }
  // Kahn on the dist-0 subgraph; leftovers sit on a combinational cycle.
  std::queue<std::size_t> ready;
  for (std::size_t i = 0; i < indegree.size(); ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  std::size_t seen = 0;
  while (!ready.empty()) {
    std::size_t u = ready.front();
    ready.pop();
    ++seen;
    for (std::size_t v : comb[u]) {
      if (--indegree[v] == 0) ready.push(v);
    }
  }
  if (seen != ddg.ops.size()) {
    for (std::size_t i = 0; i < indegree.size(); ++i) {
      if (indegree[i] != 0) {
        throw Error(ErrorKind::Validation,
                    "combinational cycle through op '" + ddg.ops[i].id + "'");
      }
    }
  }
}

std::int64_t op_latency_cycles(const Rational& delay_ns, const Rational& f_mhz) {
  if (delay_ns <= 0 || f_mhz <= 0) {
    throw Error(ErrorKind::Precondition, "op_latency_cycles: arguments must be > 0");
  }
  // period_ns = 1000 / f_mhz
  return std::max<std::int64_t>(1, ceil_div(delay_ns * f_mhz / 1000));
}

bool ii_feasible(const Ddg& ddg, const Rational& f_mhz, std::int64_t ii) {
  return feasible(build_graph(ddg, f_mhz), ii);
}

std::int64_t min_ii(const Ddg& ddg, const Rational& f_mhz) {
  Graph g = build_graph(ddg, f_mhz);
  std::int64_t lo = 1;
  std::int64_t hi = std::max<std::int64_t>(
      1, std::accumulate(g.latency.begin(), g.latency.end(), std::int64_t{0}));
  while (lo < hi) {
    std::int64_t mid = lo + (hi - lo) / 2;
    if (feasible(g, mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

Rational max_cycle_ratio(const Ddg& ddg, const Rational& f_mhz) {
  return max_ratio(build_graph(ddg, f_mhz), nullptr);
}

std::vector<std::string> critical_cycle(const Ddg& ddg, const Rational& f_mhz) {
  Graph g = build_graph(ddg, f_mhz);
  std::vector<std::int64_t> potential;
  Rational ratio = max_ratio(g, &potential);
  if (ratio.numerator() == 0) throw Error(ErrorKind::Precondition, "acyclic");

  // At the optimal ratio no cycle is positive, and the zero-weight (critical)
  // cycles are exactly the cycles made of tight edges.
  const Weights w{ratio.denominator(), ratio.numerator()};
  const std::size_t n = g.size();
  std::vector<std::vector<std::size_t>> tight(n);
  for (const Edge& e : g.edges) {
    if (potential[e.from] + w(g, e) == potential[e.to]) tight[e.from].push_back(e.to);
  }
  for (auto& succ : tight) {
    std::sort(succ.begin(), succ.end());
    succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
  }

  auto reaches = [&](std::size_t from, std::size_t target,
                     const std::vector<bool>& blocked) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v : tight[u]) {
        if (v == target) return true;
        if (!seen[v] && !blocked[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
      }
    }
    return false;
  };

  std::vector<std::size_t> by_id(n);
  std::iota(by_id.begin(), by_id.end(), 0);
  std::sort(by_id.begin(), by_id.end(),
            [&](std::size_t a, std::size_t b) { return ddg.ops[a].id < ddg.ops[b].id; });

  const std::vector<bool> none(n, false);
  std::optional<std::size_t> start;
  for (std::size_t v : by_id) {
    if (reaches(v, v, none)) {
      start = v;
      break;
    }
  }
  if (!start) throw Error(ErrorKind::Precondition, "acyclic");  // unreachable

  // Greedy walk: close the cycle as soon as possible (a prefix sorts first),
  // otherwise step to the smallest id that can still return to the start.
  std::vector<std::string> cycle{ddg.ops[*start].id};
  std::vector<bool> visited(n, false);
  visited[*start] = true;
  std::size_t u = *start;
  for (;;) {
    const auto& succ = tight[u];
    if (std::find(succ.begin(), succ.end(), *start) != succ.end()) return cycle;
    std::optional<std::size_t> next;
    for (std::size_t v : succ) {
      if (visited[v] || !reaches(v, *start, visited)) continue;
      if (!next || ddg.ops[v].id < ddg.ops[*next].id) next = v;
    }
    u = *next;
    visited[u] = true;
    cycle.push_back(ddg.ops[u].id);
  }
}

std::int64_t pipeline_depth(const Ddg& ddg, const Rational& f_mhz) {
  Graph g = build_graph(ddg, f_mhz);
  const std::size_t n = g.size();
  std::vector<std::vector<std::size_t>> succ(n);
  std::vector<std::size_t> indegree(n, 0);
  for (const Edge& e : g.edges) {
    if (e.dist == 0) {
      succ[e.from].push_back(e.to);
      ++indegree[e.to];
    }
  }
  std::vector<std::int64_t> finish(n, 0);
  std::queue<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    finish[i] = g.latency[i];
    if (indegree[i] == 0) ready.push(i);
  }
  std::int64_t depth = 1;
  while (!ready.empty()) {
    std::size_t u = ready.front();
    ready.pop();
    depth = std::max(depth, finish[u]);
    for (std::size_t v : succ[u]) {
      finish[v] = std::max(finish[v], finish[u] + g.latency[v]);
      if (--indegree[v] == 0) ready.push(v);
    }
  }
  return depth;
}

}  // namespace pumpwise
