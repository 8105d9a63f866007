#include "rtst/deterministic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <vector>

#include "rtst/model.hpp"
#include "rtst/simplex.hpp"

namespace rtst {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<int> ascending_by_cost(const Vector& costs) {
  std::vector<int> order(costs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return costs[a] < costs[b]; });
  return order;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

// Dijkstra keeping the first-found parent arc on distance ties.
Vector shortest_path_vector(const ShortestPath& sp, const Vector& costs,
                            double* value) {
  std::vector<std::vector<int>> out(sp.node_count);
  for (int a = 0; a < costs.size(); ++a) out[sp.arcs[a].first].push_back(a);
  std::vector<double> dist(sp.node_count, kInf);
  std::vector<int> parent_arc(sp.node_count, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[sp.source] = 0.0;
  heap.emplace(0.0, sp.source);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (int a : out[u]) {
      const int v = sp.arcs[a].second;
      if (d + costs[a] < dist[v]) {
        dist[v] = d + costs[a];
        parent_arc[v] = a;
        heap.emplace(dist[v], v);
      }
    }
  }
  if (dist[sp.sink] == kInf)
    throw InfeasibleError("shortest_path: sink unreachable");
  Vector z = Vector::Zero(costs.size());
  for (int v = sp.sink; v != sp.source; v = sp.arcs[parent_arc[v]].first)
    z[parent_arc[v]] = 1.0;
  *value = dist[sp.sink];
  return z;
}

IncrementalResult incremental_sp_enumerate(const ShortestPath& sp,
                                           const Vector& x, const Vector& c) {
  const int n = static_cast<int>(x.size());
  std::vector<int> free_arcs;
  for (int i = 0; i < n; ++i)
    if (x[i] < 0.5) free_arcs.push_back(i);
  if (free_arcs.size() > 25)
    throw NumericalError("incremental: enumeration fallback too large");
  IncrementalResult best;
  best.value = kInf;
  Vector z = x;
  for (std::uint64_t mask = 0; mask < (1ull << free_arcs.size()); ++mask) {
    double val = 0.0;
    for (size_t k = 0; k < free_arcs.size(); ++k) {
      const bool on = (mask >> k) & 1u;
      z[free_arcs[k]] = on ? 1.0 : 0.0;
      if (on) val += c[free_arcs[k]];
    }
    if (val < best.value && structure_feasible(sp, n, z)) {
      best.value = val;
      best.y = z - x;
    }
  }
  if (!std::isfinite(best.value))
    throw InfeasibleError("incremental: no recourse completion exists");
  return best;
}

IncrementalResult incremental_sp(const ShortestPath& sp, const Vector& x,
                                 const Vector& c) {
  const int n = static_cast<int>(x.size());
  const LinearSystem sys = build_linear_system(sp, n);
  LpProblem lp = LpProblem::with_vars(n, LpSense::Minimize);
  lp.objective = c;
  const Vector rhs = sys.rhs - sys.lhs * x;
  for (int r = 0; r < sys.rhs.size(); ++r)
    lp.add_row(sys.lhs.row(r), LpRelation::Equal, rhs[r]);
  lp.upper = (Vector::Ones(n) - x).cwiseMax(0.0);
  const LpResult res = lp_solve(lp);
  if (res.status == LpStatus::Infeasible)
    throw InfeasibleError("incremental: no recourse completion exists");
  if (res.status != LpStatus::Optimal)
    throw NumericalError("incremental: recourse solve failed");
  IncrementalResult out;
  out.y = res.x;
  for (int i = 0; i < n; ++i) {
    const double r = std::round(out.y[i]);
    // vertices of the capacitated flow polytope are integral; a fractional
    // component signals degeneracy and we fall back to enumeration
    if (std::abs(out.y[i] - r) > 1e-6) return incremental_sp_enumerate(sp, x, c);
    out.y[i] = r;
  }
  out.value = c.dot(out.y);
  return out;
}

}  // namespace

DetSolution solve_p(const Structure& structure, const Vector& costs) {
  const int n = static_cast<int>(costs.size());
  if ((costs.array() < -kTol).any())
    throw ValidationError("solve_p: costs must be nonnegative");
  DetSolution sol;
  sol.z = Vector::Zero(n);
  sol.value = 0.0;
  if (const auto* sel = std::get_if<Selection>(&structure)) {
    if (sel->p > n) throw InfeasibleError("selection: p exceeds item count");
    const auto order = ascending_by_cost(costs);
    for (int k = 0; k < sel->p; ++k) {
      sol.z[order[k]] = 1.0;
      sol.value += costs[order[k]];
    }
    return sol;
  }
  if (const auto* rs = std::get_if<RepSelection>(&structure)) {
    for (const auto& group : rs->groups) {
      int best = group.front();
      for (int i : group)
        if (costs[i] < costs[best]) best = i;
      sol.z[best] = 1.0;
      sol.value += costs[best];
    }
    return sol;
  }
  if (const auto* sp = std::get_if<ShortestPath>(&structure)) {
    sol.z = shortest_path_vector(*sp, costs, &sol.value);
    return sol;
  }
  if (const auto* st = std::get_if<SpanningTree>(&structure)) {
    UnionFind uf(st->node_count);
    int picked = 0;
    for (int e : ascending_by_cost(costs)) {
      if (!uf.unite(st->edges[e].first, st->edges[e].second)) continue;
      sol.z[e] = 1.0;
      sol.value += costs[e];
      ++picked;
    }
    if (picked != st->node_count - 1)
      throw InfeasibleError("spanning_tree: graph not connected");
    return sol;
  }
  sol.z = Vector::Ones(n);
  sol.value = costs.sum();
  return sol;
}

TwoStageSolution two_stage(const Instance& inst, const Vector& scenario) {
  const int n = inst.item_count();
  if (scenario.size() != n)
    throw ValidationError("two_stage: scenario dimension mismatch");
  if ((scenario.array() < -kTol).any())
    throw ValidationError("two_stage: scenario must be nonnegative");
  const Vector merged = inst.first_stage_costs.cwiseMin(scenario);
  const DetSolution base = solve_p(inst.structure, merged);
  TwoStageSolution sol;
  sol.x = Vector::Zero(n);
  sol.y = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (base.z[i] < 0.5) continue;
    if (inst.first_stage_costs[i] <= scenario[i])
      sol.x[i] = 1.0;
    else
      sol.y[i] = 1.0;
  }
  sol.value = base.value;
  return sol;
}

IncrementalResult incremental(const Structure& structure, const Vector& x,
                              const Vector& scenario) {
  const int n = static_cast<int>(x.size());
  if (scenario.size() != n)
    throw ValidationError("incremental: scenario dimension mismatch");
  if (!is_binary(x))
    throw ValidationError("incremental: partial solution must be binary");
  IncrementalResult out;
  out.y = Vector::Zero(n);
  if (const auto* sel = std::get_if<Selection>(&structure)) {
    const int have = static_cast<int>(std::lround(x.sum()));
    if (have > sel->p)
      throw InfeasibleError("incremental: too many items fixed");
    int need = sel->p - have;
    for (int i : ascending_by_cost(scenario)) {
      if (need == 0) break;
      if (x[i] > 0.5) continue;
      out.y[i] = 1.0;
      out.value += scenario[i];
      --need;
    }
    return out;
  }
  if (const auto* rs = std::get_if<RepSelection>(&structure)) {
    for (const auto& group : rs->groups) {
      int chosen = 0;
      for (int i : group) chosen += x[i] > 0.5;
      if (chosen > 1)
        throw InfeasibleError("incremental: group has two fixed items");
      if (chosen == 1) continue;
      int best = -1;
      for (int i : group)
        if (best < 0 || scenario[i] < scenario[best]) best = i;
      out.y[best] = 1.0;
      out.value += scenario[best];
    }
    return out;
  }
  if (const auto* sp = std::get_if<ShortestPath>(&structure))
    return incremental_sp(*sp, x, scenario);
  if (const auto* st = std::get_if<SpanningTree>(&structure)) {
    UnionFind uf(st->node_count);
    int components = st->node_count;
    for (int e = 0; e < n; ++e) {
      if (x[e] < 0.5) continue;
      if (!uf.unite(st->edges[e].first, st->edges[e].second))
        throw InfeasibleError("incremental: fixed edges contain a cycle");
      --components;
    }
    for (int e : ascending_by_cost(scenario)) {
      if (components == 1) break;
      if (x[e] > 0.5) continue;
      if (!uf.unite(st->edges[e].first, st->edges[e].second)) continue;
      out.y[e] = 1.0;
      out.value += scenario[e];
      --components;
    }
    if (components != 1)
      throw InfeasibleError("incremental: no spanning completion exists");
    return out;
  }
  out.y = Vector::Ones(n) - x;
  out.value = scenario.dot(out.y);
  return out;
}

}  // namespace rtst
