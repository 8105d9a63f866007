#include "rtst/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>
#include <vector>

#include "rtst/uncertainty.hpp"

namespace rtst {
namespace {

bool path_exists(const ShortestPath& sp) {
  std::vector<std::vector<int>> out(sp.node_count);
  for (const auto& [u, v] : sp.arcs) out[u].push_back(v);
  std::vector<char> seen(sp.node_count, 0);
  std::queue<int> q;
  q.push(sp.source);
  seen[sp.source] = 1;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    if (u == sp.sink) return true;
    for (int v : out[u])
      if (!seen[v]) {
        seen[v] = 1;
        q.push(v);
      }
  }
  return false;
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

void validate_structure(const Structure& structure, int n) {
  if (const auto* sel = std::get_if<Selection>(&structure)) {
    if (sel->p < 1 || sel->p > n)
      throw ValidationError("selection: p must lie in [1, n]");
    return;
  }
  if (const auto* rs = std::get_if<RepSelection>(&structure)) {
    std::vector<char> hit(n, 0);
    if (rs->groups.empty())
      throw ValidationError("rep_selection: needs at least one group");
    for (const auto& g : rs->groups) {
      if (g.empty()) throw ValidationError("rep_selection: empty group");
      for (int i : g) {
        if (i < 0 || i >= n)
          throw ValidationError("rep_selection: item index out of range");
        if (hit[i]) throw ValidationError("rep_selection: groups must be disjoint");
        hit[i] = 1;
      }
    }
    if (std::find(hit.begin(), hit.end(), 0) != hit.end())
      throw ValidationError("rep_selection: groups must cover every item");
    return;
  }
  if (const auto* sp = std::get_if<ShortestPath>(&structure)) {
    if (sp->node_count < 2)
      throw ValidationError("shortest_path: needs at least two nodes");
    if (static_cast<int>(sp->arcs.size()) != n)
      throw ValidationError("shortest_path: arc count must equal item count");
    if (sp->source == sp->sink)
      throw ValidationError("shortest_path: source and sink must differ");
    if (sp->source < 0 || sp->source >= sp->node_count || sp->sink < 0 ||
        sp->sink >= sp->node_count)
      throw ValidationError("shortest_path: terminal node out of range");
    for (const auto& [u, v] : sp->arcs) {
      if (u < 0 || u >= sp->node_count || v < 0 || v >= sp->node_count)
        throw ValidationError("shortest_path: arc endpoint out of range");
      if (u == v) throw ValidationError("shortest_path: self-loops not allowed");
    }
    if (!path_exists(*sp))
      throw ValidationError("shortest_path: no path from source to sink");
    return;
  }
  if (const auto* st = std::get_if<SpanningTree>(&structure)) {
    if (st->node_count < 1)
      throw ValidationError("spanning_tree: needs at least one node");
    if (static_cast<int>(st->edges.size()) != n)
      throw ValidationError("spanning_tree: edge count must equal item count");
    UnionFind uf(st->node_count);
    int components = st->node_count;
    for (const auto& [u, v] : st->edges) {
      if (u < 0 || u >= st->node_count || v < 0 || v >= st->node_count)
        throw ValidationError("spanning_tree: edge endpoint out of range");
      if (u == v) throw ValidationError("spanning_tree: self-loops not allowed");
      if (uf.unite(u, v)) --components;
    }
    if (components != 1)
      throw ValidationError("spanning_tree: graph must be connected");
    return;
  }
  // AllOnes has nothing to check
}

}  // namespace

void validate_instance(const Instance& inst) {
  const int n = inst.item_count();
  if (n < 1) throw ValidationError("instance: needs at least one item");
  if ((inst.first_stage_costs.array() < -kTol).any())
    throw ValidationError("instance: first-stage costs must be nonnegative");
  validate_structure(inst.structure, n);
  validate_uncertainty(inst.uncertainty, n);
}

LinearSystem build_linear_system(const Structure& structure, int n) {
  LinearSystem sys;
  sys.integral = true;
  if (const auto* sel = std::get_if<Selection>(&structure)) {
    sys.lhs = Matrix::Ones(1, n);
    sys.rhs = Vector::Constant(1, static_cast<double>(sel->p));
    sys.relations = {Relation::Equal};
    return sys;
  }
  if (const auto* rs = std::get_if<RepSelection>(&structure)) {
    const int rows = static_cast<int>(rs->groups.size());
    sys.lhs = Matrix::Zero(rows, n);
    sys.rhs = Vector::Ones(rows);
    sys.relations.assign(rows, Relation::Equal);
    for (int l = 0; l < rows; ++l)
      for (int i : rs->groups[l]) sys.lhs(l, i) = 1.0;
    return sys;
  }
  if (const auto* sp = std::get_if<ShortestPath>(&structure)) {
    sys.lhs = Matrix::Zero(sp->node_count, n);
    sys.rhs = Vector::Zero(sp->node_count);
    sys.relations.assign(sp->node_count, Relation::Equal);
    for (int a = 0; a < n; ++a) {
      sys.lhs(sp->arcs[a].first, a) += 1.0;
      sys.lhs(sp->arcs[a].second, a) -= 1.0;
    }
    sys.rhs[sp->source] = 1.0;
    sys.rhs[sp->sink] = -1.0;
    return sys;
  }
  if (std::holds_alternative<AllOnes>(structure)) {
    sys.lhs = Matrix::Ones(1, n);
    sys.rhs = Vector::Constant(1, static_cast<double>(n));
    sys.relations = {Relation::Equal};
    return sys;
  }
  throw ValidationError("spanning_tree: no linear constraint description");
}

bool structure_feasible(const Structure& structure, int n, const Vector& z,
                        double tol) {
  if (z.size() != n || !is_binary(z, tol)) return false;
  if (const auto* st = std::get_if<SpanningTree>(&structure)) {
    UnionFind uf(st->node_count);
    int picked = 0;
    for (int e = 0; e < n; ++e) {
      if (z[e] < 0.5) continue;
      ++picked;
      if (!uf.unite(st->edges[e].first, st->edges[e].second)) return false;
    }
    return picked == st->node_count - 1;
  }
  const LinearSystem sys = build_linear_system(structure, n);
  const Vector lhs = sys.lhs * z;
  for (int r = 0; r < sys.rhs.size(); ++r) {
    const double diff = lhs[r] - sys.rhs[r];
    if (sys.relations[r] == Relation::Equal ? std::abs(diff) > tol : diff < -tol)
      return false;
  }
  return true;
}

Instance gen_chain_instance(int n, Vector first_stage_costs, UncertaintySet u,
                            bool as_graph) {
  if (n < 1) throw ValidationError("chain: n must be positive");
  if (first_stage_costs.size() != n)
    throw ValidationError("chain: cost vector must have length n");
  validate_uncertainty(u, n);
  Instance inst;
  inst.first_stage_costs = std::move(first_stage_costs);
  inst.uncertainty = std::move(u);
  if (as_graph) {
    ShortestPath sp;
    sp.node_count = n + 1;
    sp.source = 0;
    sp.sink = n;
    for (int i = 0; i < n; ++i) sp.arcs.emplace_back(i, i + 1);
    inst.structure = sp;
  } else {
    inst.structure = AllOnes{};
  }
  validate_instance(inst);
  return inst;
}

Instance gen_sp_gap_instance(int m, double big_m) {
  if (m < 1) throw ValidationError("sp_gap: m must be positive");
  if (big_m <= 0.0) big_m = 100.0 * m * m;
  if (big_m <= static_cast<double>(m) * m)
    throw ValidationError("sp_gap: M must exceed m^2");
  const int n = 2 * m;
  // nodes: 0 = source, 1 = sink, 2..m+1 = middle; arc 2i: s->i, arc 2i+1: i->t
  ShortestPath sp;
  sp.node_count = m + 2;
  sp.source = 0;
  sp.sink = 1;
  Instance inst;
  inst.first_stage_costs = Vector::Zero(n);
  Budgeted u;
  u.c_nominal = Vector::Zero(n);
  u.d = Vector::Zero(n);
  u.gamma = static_cast<double>(m);
  for (int i = 0; i < m; ++i) {
    sp.arcs.emplace_back(0, 2 + i);
    sp.arcs.emplace_back(2 + i, 1);
    inst.first_stage_costs[2 * i + 1] = big_m;
    u.c_nominal[2 * i] = big_m;
    u.d[2 * i + 1] = static_cast<double>(m);
  }
  inst.structure = std::move(sp);
  inst.uncertainty = std::move(u);
  validate_instance(inst);
  return inst;
}

Instance gen_selection_gap_instance() {
  Instance inst;
  inst.first_stage_costs = Vector{{10.0, 1.0}};
  inst.structure = Selection{2};
  HPolytope u;
  u.c_nominal = Vector::Zero(2);
  u.A = Matrix{{1.0, 0.5}};
  u.b = Vector::Ones(1);
  inst.uncertainty = std::move(u);
  validate_instance(inst);
  return inst;
}

Instance gen_selection_tightness_instance(double mu, double gamma, double eps) {
  if (!(gamma > eps) || !(eps > 0.0) || !(mu > 0.0))
    throw ValidationError("tightness: requires gamma > eps > 0 and mu > 0");
  Instance inst;
  inst.first_stage_costs = Vector{{10.0, gamma}};
  inst.structure = Selection{2};
  HPolytope u;
  u.c_nominal = Vector{{0.0, eps}};
  u.A = Matrix{{1.0, 0.5 + mu}};
  u.b = Vector::Ones(1);
  inst.uncertainty = std::move(u);
  validate_instance(inst);
  return inst;
}

Instance reduce_vp_to_hp(const Instance& inst) {
  const auto* vp = std::get_if<VPolytope>(&inst.uncertainty);
  if (!vp || !std::holds_alternative<AllOnes>(inst.structure))
    throw ValidationError(
        "reduction: needs an all-ones instance with vertex-described costs");
  const int n = inst.item_count();
  const int k = static_cast<int>(vp->vertices.size());
  // scenario (delta, lambda): delta_i = sum_j lambda_j c_{j,i}, sum lambda = 1
  Instance out;
  out.first_stage_costs = Vector::Zero(n + k);
  out.first_stage_costs.head(n) = inst.first_stage_costs;
  out.structure = AllOnes{};
  HPolytope u;
  u.c_nominal = Vector::Zero(n + k);
  u.A = Matrix::Zero(2 * n + 2, n + k);
  u.b = Vector::Zero(2 * n + 2);
  for (int i = 0; i < n; ++i) {
    u.A(2 * i, i) = 1.0;
    u.A(2 * i + 1, i) = -1.0;
    for (int j = 0; j < k; ++j) {
      u.A(2 * i, n + j) = -vp->vertices[j][i];
      u.A(2 * i + 1, n + j) = vp->vertices[j][i];
    }
  }
  u.A.row(2 * n).tail(k).setOnes();
  u.A.row(2 * n + 1).tail(k).setConstant(-1.0);
  u.b[2 * n] = 1.0;
  u.b[2 * n + 1] = -1.0;
  out.uncertainty = std::move(u);
  validate_instance(out);
  return out;
}

Instance reduce_two_scenario_to_ellipsoid(const Instance& inst) {
  const auto* vp = std::get_if<VPolytope>(&inst.uncertainty);
  if (!vp || vp->vertices.size() != 2 ||
      !std::holds_alternative<AllOnes>(inst.structure))
    throw ValidationError(
        "reduction: needs an all-ones instance with exactly two scenarios");
  const int n = inst.item_count();
  Instance out;
  out.first_stage_costs = 2.0 * inst.first_stage_costs;
  out.structure = AllOnes{};
  Ellipsoid u;
  u.c_nominal = vp->vertices[0] + vp->vertices[1];
  u.A = Matrix::Zero(n, n);
  u.A.col(0) = vp->vertices[0] - vp->vertices[1];
  out.uncertainty = std::move(u);
  validate_instance(out);
  return out;
}

namespace {

// Platform-stable uniforms: mt19937_64 output is pinned by the standard.
double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * unit(rng);
}

int pick(std::mt19937_64& rng, int count) {
  return static_cast<int>(rng() % static_cast<std::uint64_t>(count));
}

Vector uniform_vector(std::mt19937_64& rng, int n, double lo, double hi) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = uniform(rng, lo, hi);
  return v;
}

Structure random_structure(std::mt19937_64& rng, int kind, int n) {
  switch (kind) {
    case 0:
      return Selection{1 + pick(rng, n)};
    case 1: {
      RepSelection rs;
      const int groups = 1 + pick(rng, n);
      rs.groups.assign(groups, {});
      for (int i = 0; i < groups; ++i) rs.groups[i].push_back(i);
      for (int i = groups; i < n; ++i) rs.groups[pick(rng, groups)].push_back(i);
      return rs;
    }
    case 2: {
      ShortestPath sp;
      sp.node_count = 2 + pick(rng, n);  // at most n + 1 nodes for n arcs
      sp.source = 0;
      sp.sink = sp.node_count - 1;
      for (int i = 0; i + 1 < sp.node_count; ++i) sp.arcs.emplace_back(i, i + 1);
      while (static_cast<int>(sp.arcs.size()) < n) {
        const int a = pick(rng, sp.node_count - 1);
        const int b = a + 1 + pick(rng, sp.node_count - 1 - a);
        sp.arcs.emplace_back(a, b);
      }
      return sp;
    }
    default:
      return AllOnes{};
  }
}

UncertaintySet random_uncertainty(std::mt19937_64& rng, int family, int n) {
  switch (family) {
    case 0: {
      HPolytope u;
      u.c_nominal = uniform_vector(rng, n, 0.0, 5.0);
      const int extra = pick(rng, 3);
      u.A = Matrix::Zero(1 + extra, n);
      u.b = Vector::Zero(1 + extra);
      u.A.row(0).setOnes();
      u.b[0] = uniform(rng, 0.5, 3.0);
      for (int r = 1; r <= extra; ++r) {
        for (int i = 0; i < n; ++i) u.A(r, i) = uniform(rng, 0.0, 1.0);
        u.b[r] = uniform(rng, 0.5, 3.0);
      }
      return u;
    }
    case 1: {
      VPolytope u;
      const int k = 1 + pick(rng, 3);
      for (int j = 0; j < k; ++j)
        u.vertices.push_back(uniform_vector(rng, n, 0.0, 5.0));
      return u;
    }
    case 2: {
      Ellipsoid u;
      u.c_nominal = uniform_vector(rng, n, 0.5, 5.0);
      const int q = 1 + pick(rng, 2);
      u.A = Matrix::Zero(n, q);
      for (int i = 0; i < n; ++i) {
        Vector row = uniform_vector(rng, q, -1.0, 1.0);
        const double cap = uniform(rng, 0.0, 1.0) * u.c_nominal[i];
        const double nrm = row.norm();
        if (nrm > 1e-12) row *= cap / nrm;
        u.A.row(i) = row;
      }
      return u;
    }
    case 3: {
      Budgeted u;
      u.c_nominal = uniform_vector(rng, n, 0.0, 5.0);
      u.d = uniform_vector(rng, n, 0.0, 3.0);
      u.gamma = uniform(rng, 0.0, 1.0) * u.d.sum();
      return u;
    }
    default: {
      MultiBudget u;
      u.c_nominal = uniform_vector(rng, n, 0.0, 5.0);
      if (n >= 2 && pick(rng, 2) == 1) {
        const int split = 1 + pick(rng, n - 1);
        std::vector<int> first, second;
        for (int i = 0; i < split; ++i) first.push_back(i);
        for (int i = split; i < n; ++i) second.push_back(i);
        for (int i = 0; i < split; ++i)
          if (pick(rng, 3) == 0) second.push_back(i);
        u.subsets = {first, second};
        u.budgets = uniform_vector(rng, 2, 0.5, 4.0);
      } else {
        std::vector<int> all(n);
        std::iota(all.begin(), all.end(), 0);
        u.subsets = {all};
        u.budgets = uniform_vector(rng, 1, 0.5, 4.0);
      }
      return u;
    }
  }
}

}  // namespace

Instance gen_random_instance(std::uint64_t seed, int max_items) {
  std::mt19937_64 rng(seed);
  const int kind = static_cast<int>(seed % 4);
  const int family = static_cast<int>((seed / 4) % 5);
  const int n = 2 + pick(rng, std::max(1, max_items - 1));
  Instance inst;
  inst.first_stage_costs = uniform_vector(rng, n, 0.0, 10.0);
  inst.structure = random_structure(rng, kind, n);
  inst.uncertainty = random_uncertainty(rng, family, n);
  validate_instance(inst);
  return inst;
}

Instance gen_random_tree_instance(std::uint64_t seed, int max_items) {
  std::mt19937_64 rng(seed);
  const int n = 2 + pick(rng, std::max(1, max_items - 1));
  SpanningTree st;
  st.node_count = 2 + pick(rng, n);  // a tree needs node_count - 1 <= n edges
  for (int v = 1; v < st.node_count; ++v) st.edges.emplace_back(pick(rng, v), v);
  while (static_cast<int>(st.edges.size()) < n) {
    const int a = pick(rng, st.node_count);
    int b = pick(rng, st.node_count);
    if (a == b) b = (b + 1) % st.node_count;
    st.edges.emplace_back(a, b);
  }
  Instance inst;
  inst.first_stage_costs = uniform_vector(rng, n, 0.0, 10.0);
  inst.structure = std::move(st);
  VPolytope u;
  const int k = 1 + pick(rng, 3);
  for (int j = 0; j < k; ++j)
    u.vertices.push_back(uniform_vector(rng, n, 0.0, 5.0));
  inst.uncertainty = std::move(u);
  validate_instance(inst);
  return inst;
}

}  // namespace rtst
