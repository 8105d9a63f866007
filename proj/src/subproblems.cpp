#include "rtst/subproblems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

namespace rtst {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_sizes(const CappedSubproblem& sub) {
  const auto n = sub.first_stage_costs.size();
  if (sub.c_nominal.size() != n || sub.caps.size() != n)
    throw ValidationError("capped subproblem: cost/cap sizes disagree");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (sub.first_stage_costs[i] < -kTol || sub.c_nominal[i] < -kTol)
      throw ValidationError("capped subproblem: negative costs");
    if (sub.caps[i] < -kTol || sub.caps[i] > 1.0 + kTol)
      throw ValidationError("capped subproblem: caps outside [0, 1]");
  }
}

int grid_units(double v, double eps, const char* what) {
  const double raw = v / eps;
  const int k = static_cast<int>(std::lround(raw));
  if (std::abs(raw - k) > 1e-6)
    throw ValidationError(std::string(what) + " is not a multiple of the grid step");
  return k;
}

}  // namespace

CappedSolution capped_selection_dp(const CappedSubproblem& sub, double eps) {
  const auto* sel = std::get_if<Selection>(&sub.structure);
  if (!sel) throw ValidationError("capped_selection_dp: structure is not a selection");
  check_sizes(sub);
  if (!(eps > 0.0) || eps > 1.0 + kTol)
    throw ValidationError("capped_selection_dp: eps must lie in (0, 1]");
  const int n = static_cast<int>(sub.first_stage_costs.size());
  const int per_item = grid_units(1.0, eps, "1/eps");
  const int target = sel->p * per_item;

  std::vector<int> cap_units(n);
  for (int i = 0; i < n; ++i)
    cap_units[i] = std::min(grid_units(sub.caps[i], eps, "cap"), per_item);

  // best[s] = cheapest cost reaching mass s (in eps-units) with the items
  // processed so far; choice[i][s] records the winning assignment at item i:
  // -2 skip, -1 first stage, k >= 1 recourse of k units.
  std::vector<double> best(target + 1, kInf);
  best[0] = 0.0;
  std::vector<std::vector<int>> choice(n, std::vector<int>(target + 1, -2));
  for (int i = 0; i < n; ++i) {
    std::vector<double> next(target + 1, kInf);
    auto relax = [&](int s, double cost, int what) {
      if (cost < next[s]) {
        next[s] = cost;
        choice[i][s] = what;
      }
    };
    for (int s = 0; s <= target; ++s) {
      if (best[s] == kInf) continue;
      relax(s, best[s], -2);
      if (s + per_item <= target)
        relax(s + per_item, best[s] + sub.first_stage_costs[i], -1);
      for (int k = 1; k <= cap_units[i] && s + k <= target; ++k)
        relax(s + k, best[s] + sub.c_nominal[i] * (k * eps), k);
    }
    best = std::move(next);
  }
  if (best[target] == kInf)
    throw InfeasibleError("capped_selection_dp: mass p unreachable under the caps");

  CappedSolution out;
  out.value = best[target];
  out.x = Vector::Zero(n);
  out.y = Vector::Zero(n);
  int s = target;
  for (int i = n - 1; i >= 0; --i) {
    const int what = choice[i][s];
    if (what == -1) {
      out.x[i] = 1.0;
      s -= per_item;
    } else if (what >= 1) {
      out.y[i] = what * eps;
      s -= what;
    }
  }
  return out;
}

CappedSolution capped_rs_greedy(const CappedSubproblem& sub) {
  const auto* rs = std::get_if<RepSelection>(&sub.structure);
  if (!rs) throw ValidationError("capped_rs_greedy: structure is not rep-selection");
  check_sizes(sub);
  const int n = static_cast<int>(sub.first_stage_costs.size());
  CappedSolution out;
  out.x = Vector::Zero(n);
  out.y = Vector::Zero(n);
  out.value = 0.0;
  for (const auto& group : rs->groups) {
    std::vector<int> order = group;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return sub.c_nominal[a] < sub.c_nominal[b];
    });
    double remaining = 1.0;
    double pour_cost = 0.0;
    std::vector<std::pair<int, double>> pour;
    for (int j : order) {
      if (remaining <= 1e-12) break;
      const double take = std::min(sub.caps[j], remaining);
      if (take <= 0.0) continue;
      pour.emplace_back(j, take);
      pour_cost += sub.c_nominal[j] * take;
      remaining -= take;
    }
    int cheapest = group.front();
    for (int j : group)
      if (sub.first_stage_costs[j] < sub.first_stage_costs[cheapest]) cheapest = j;
    const double c_hat = sub.first_stage_costs[cheapest];
    if (remaining > 1e-12 || c_hat <= pour_cost + kTol) {
      out.x[cheapest] = 1.0;
      out.value += c_hat;
    } else {
      for (const auto& [j, take] : pour) out.y[j] = take;
      out.value += pour_cost;
    }
  }
  return out;
}

std::optional<UnitFlow> min_cost_unit_flow(
    int node_count, const std::vector<std::pair<int, int>>& arcs,
    const Vector& caps, const Vector& costs, int source, int sink) {
  const int m = static_cast<int>(arcs.size());
  if (caps.size() != m || costs.size() != m)
    throw ValidationError("min_cost_unit_flow: cap/cost sizes disagree");
  if (source < 0 || source >= node_count || sink < 0 || sink >= node_count)
    throw ValidationError("min_cost_unit_flow: endpoint out of range");
  if (source == sink) throw ValidationError("min_cost_unit_flow: source equals sink");
  for (int a = 0; a < m; ++a)
    if (costs[a] < -kTol)
      throw ValidationError("min_cost_unit_flow: negative arc cost");

  // Residual arcs come in mirror pairs: 2a is arcs[a] forward, 2a+1 backward.
  struct Res {
    int from, to;
    double cap, cost;
  };
  std::vector<Res> res(2 * m);
  std::vector<std::vector<int>> adj(node_count);
  for (int a = 0; a < m; ++a) {
    const auto [u, v] = arcs[a];
    res[2 * a] = {u, v, std::max(caps[a], 0.0), costs[a]};
    res[2 * a + 1] = {v, u, 0.0, -costs[a]};
    adj[u].push_back(2 * a);
    adj[v].push_back(2 * a + 1);
  }

  std::vector<double> phi(node_count, 0.0);
  double pushed = 0.0;
  const int max_rounds = 200 + 8 * m * m;
  for (int round = 0; round < max_rounds; ++round) {
    if (pushed >= 1.0 - 1e-12) break;
    // Dijkstra on reduced costs over residual arcs with positive capacity.
    std::vector<double> dist(node_count, kInf);
    std::vector<int> via(node_count, -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[source] = 0.0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[u] + 1e-15) continue;
      for (int e : adj[u]) {
        if (res[e].cap <= 1e-12) continue;
        const double rc = std::max(res[e].cost + phi[u] - phi[res[e].to], 0.0);
        if (dist[u] + rc < dist[res[e].to] - 1e-15) {
          dist[res[e].to] = dist[u] + rc;
          via[res[e].to] = e;
          heap.emplace(dist[res[e].to], res[e].to);
        }
      }
    }
    if (dist[sink] == kInf) return std::nullopt;
    for (int v = 0; v < node_count; ++v)
      if (dist[v] < kInf) phi[v] += dist[v];
    double bottleneck = 1.0 - pushed;
    for (int v = sink; v != source; v = res[via[v]].from)
      bottleneck = std::min(bottleneck, res[via[v]].cap);
    for (int v = sink; v != source; v = res[via[v]].from) {
      res[via[v]].cap -= bottleneck;
      res[via[v] ^ 1].cap += bottleneck;
    }
    pushed += bottleneck;
  }
  if (pushed < 1.0 - 1e-12)
    throw NumericalError("min_cost_unit_flow: augmentation cap exhausted");

  UnitFlow out;
  out.flow = Vector::Zero(m);
  for (int a = 0; a < m; ++a) {
    const double f = std::clamp(res[2 * a + 1].cap, 0.0, std::max(caps[a], 0.0));
    out.flow[a] = f;
    out.cost += costs[a] * f;
  }
  return out;
}

CappedSolution capped_sp_multigraph(const CappedSubproblem& sub) {
  const auto* sp = std::get_if<ShortestPath>(&sub.structure);
  if (!sp) throw ValidationError("capped_sp_multigraph: structure is not shortest-path");
  check_sizes(sub);
  const int n = static_cast<int>(sub.first_stage_costs.size());
  if (static_cast<int>(sp->arcs.size()) != n)
    throw ValidationError("capped_sp_multigraph: arc count mismatch");
  const int V = sp->node_count;

  // Prune flow pairs to nodes lying on some s-t route.
  auto reach = [&](int start, bool forward) {
    std::vector<char> seen(V, 0);
    std::vector<int> stack{start};
    seen[start] = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (const auto& [a, b] : sp->arcs) {
        const int from = forward ? a : b, to = forward ? b : a;
        if (from == u && !seen[to]) {
          seen[to] = 1;
          stack.push_back(to);
        }
      }
    }
    return seen;
  };
  const auto from_s = reach(sp->source, true);
  const auto to_t = reach(sp->sink, false);

  struct MArc {
    int to;
    double cost;
    int orig_arc;  // >= 0: first-stage arc index; -1: flow arc
    int flow_id;
  };
  std::vector<std::vector<MArc>> adj(V);
  for (int a = 0; a < n; ++a)
    adj[sp->arcs[a].first].push_back(
        {sp->arcs[a].second, sub.first_stage_costs[a], a, -1});
  std::vector<Vector> flows;
  for (int i = 0; i < V; ++i) {
    if (!from_s[i] || !to_t[i]) continue;
    for (int j = 0; j < V; ++j) {
      if (i == j || !from_s[j] || !to_t[j]) continue;
      auto uf = min_cost_unit_flow(V, sp->arcs, sub.caps, sub.c_nominal, i, j);
      if (!uf) continue;
      adj[i].push_back({j, uf->cost, -1, static_cast<int>(flows.size())});
      flows.push_back(std::move(uf->flow));
    }
  }

  std::vector<double> dist(V, kInf);
  std::vector<std::pair<int, int>> via(V, {-1, -1});  // (node, adj slot)
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[sp->source] = 0.0;
  heap.emplace(0.0, sp->source);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u] + 1e-15) continue;
    for (int slot = 0; slot < static_cast<int>(adj[u].size()); ++slot) {
      const auto& e = adj[u][slot];
      if (dist[u] + e.cost < dist[e.to] - 1e-15) {
        dist[e.to] = dist[u] + e.cost;
        via[e.to] = {u, slot};
        heap.emplace(dist[e.to], e.to);
      }
    }
  }
  if (dist[sp->sink] == kInf)
    throw InfeasibleError("capped_sp_multigraph: sink unreachable");

  CappedSolution out;
  out.x = Vector::Zero(n);
  out.y = Vector::Zero(n);
  for (int v = sp->sink; v != sp->source;) {
    const auto [u, slot] = via[v];
    const auto& e = adj[u][slot];
    if (e.orig_arc >= 0)
      out.x[e.orig_arc] = 1.0;
    else
      out.y += flows[e.flow_id];
    v = u;
  }
  out.value = sub.first_stage_costs.dot(out.x) + sub.c_nominal.dot(out.y);
  return out;
}

}  // namespace rtst
