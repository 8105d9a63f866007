#include "rtst/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "rtst/deterministic.hpp"
#include "rtst/frank_wolfe.hpp"
#include "rtst/model.hpp"
#include "rtst/uncertainty.hpp"

namespace rtst {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

LpRelation to_lp(Relation r) {
  return r == Relation::Equal ? LpRelation::Equal : LpRelation::GreaterEqual;
}

void check_first_stage(const Instance& inst, const Vector& x) {
  if (x.size() != inst.item_count())
    throw ValidationError("eval: first stage has wrong dimension");
  if (!is_binary(x))
    throw ValidationError("eval: first stage must be binary");
}

struct TreeEnum {
  const SpanningTree& st;
  const Vector& x;
  std::vector<Vector> completions;
  Vector y;

  int find(std::vector<int>& uf, int a) const {
    while (uf[a] != a) a = uf[a] = uf[uf[a]];
    return a;
  }

  bool connectable(std::vector<int> uf, int from, int comps) const {
    for (int k = from; k < static_cast<int>(x.size()) && comps > 1; ++k) {
      if (x[k] > 0.5) continue;
      const int a = find(uf, st.edges[k].first);
      const int b = find(uf, st.edges[k].second);
      if (a != b) {
        uf[a] = b;
        --comps;
      }
    }
    return comps == 1;
  }

  void recurse(int e, std::vector<int> uf, int comps) {
    if (comps == 1) {
      completions.push_back(y);
      if (completions.size() > 200000)
        throw NumericalError("eval: too many recourse completions");
      return;
    }
    if (e == static_cast<int>(x.size()) || !connectable(uf, e, comps)) return;
    recurse(e + 1, uf, comps);
    if (x[e] > 0.5) return;  // already part of the first stage
    const int a = find(uf, st.edges[e].first);
    const int b = find(uf, st.edges[e].second);
    if (a == b) return;
    uf[a] = b;
    y[e] = 1.0;
    recurse(e + 1, std::move(uf), comps - 1);
    y[e] = 0.0;
  }
};

std::vector<Vector> tree_completions(const SpanningTree& st, const Vector& x) {
  const int n = static_cast<int>(x.size());
  std::vector<int> uf(st.node_count);
  std::iota(uf.begin(), uf.end(), 0);
  TreeEnum te{st, x, {}, Vector::Zero(n)};
  int comps = st.node_count;
  for (int e = 0; e < n; ++e) {
    if (x[e] < 0.5) continue;
    const int a = te.find(uf, st.edges[e].first);
    const int b = te.find(uf, st.edges[e].second);
    if (a == b) throw InfeasibleError("eval: fixed edges contain a cycle");
    uf[a] = b;
    --comps;
  }
  te.recurse(0, std::move(uf), comps);
  if (te.completions.empty())
    throw InfeasibleError("eval: no recourse completion exists");
  return std::move(te.completions);
}

// worst case over a finite completion list, used for spanning trees
EvalResult eval_tree(const Instance& inst, const SpanningTree& st,
                     const Vector& x) {
  const double first = inst.first_stage_costs.dot(x);
  EvalResult out;
  const std::vector<Vector> completions = tree_completions(st, x);
  const int j_count = static_cast<int>(completions.size());
  if (const auto* vp = std::get_if<VPolytope>(&inst.uncertainty)) {
    // the adversary mixes the vertices: max t s.t. t <= (sum lam_k c_k)'y_j
    const int k = static_cast<int>(vp->vertices.size());
    LpProblem lp = LpProblem::with_vars(k + 1, LpSense::Maximize);
    lp.objective[k] = 1.0;
    lp.upper.head(k).setConstant(1.0);
    Vector ones = Vector::Zero(k + 1);
    ones.head(k).setConstant(1.0);
    lp.add_row(ones, LpRelation::Equal, 1.0);
    for (const Vector& yj : completions) {
      Vector row(k + 1);
      for (int j = 0; j < k; ++j) row[j] = vp->vertices[j].dot(yj);
      row[k] = -1.0;
      lp.add_row(row, LpRelation::GreaterEqual, 0.0);
    }
    const LpResult res = lp_solve(lp);
    if (res.status != LpStatus::Optimal)
      throw NumericalError("eval: adversary game solve failed");
    out.cert.c = Vector::Zero(inst.item_count());
    for (int j = 0; j < k; ++j) out.cert.c += res.x[j] * vp->vertices[j];
  } else if (const auto* el = std::get_if<Ellipsoid>(&inst.uncertainty)) {
    // max over the ball of the completion minimum equals, by the minimax
    // swap, min over the simplex of lam^T a + ||B lam||
    const int q = scenario_dim(inst.uncertainty);
    Vector a(j_count);
    Matrix bt(j_count, q);
    for (int j = 0; j < j_count; ++j) {
      a[j] = el->c_nominal.dot(completions[j]);
      bt.row(j) = (el->A.transpose() * completions[j]).transpose();
    }
    LpProblem simplex_lp = LpProblem::with_vars(j_count, LpSense::Minimize);
    simplex_lp.objective = a;
    simplex_lp.upper = Vector::Ones(j_count);
    simplex_lp.add_row(Vector::Ones(j_count), LpRelation::Equal, 1.0);
    FwOptions opts;
    opts.gap_tol_scale = 1e-9;
    const FwResult fw = fw_solve(simplex_lp, bt, opts);
    const Vector w = bt.transpose() * fw.x;
    Vector delta = Vector::Zero(q);
    if (w.norm() > kTol) delta = w / w.norm();
    out.cert.c = el->c_nominal + el->A * delta;
  } else {
    // adversary LP: max t  s.t.  t <= (c_nom + delta)^T y_j, A delta <= b
    const auto hs = halfspace_form(inst.uncertainty);
    const int n = inst.item_count();
    const int m = static_cast<int>(hs->b.size());
    LpProblem lp = LpProblem::with_vars(n + 1, LpSense::Maximize);
    lp.objective = Vector::Zero(n + 1);
    lp.objective[n] = 1.0;
    lp.lower[n] = -kInf;
    for (int j = 0; j < j_count; ++j) {
      Vector row = Vector::Zero(n + 1);
      row.head(n) = completions[j];
      row[n] = -1.0;
      lp.add_row(row, LpRelation::GreaterEqual,
                 -hs->c_nominal.dot(completions[j]));
    }
    for (int r = 0; r < m; ++r) {
      Vector row = Vector::Zero(n + 1);
      row.head(n) = hs->A.row(r);
      lp.add_row(row, LpRelation::LessEqual, hs->b[r]);
    }
    const LpResult res = lp_solve(lp);
    if (res.status != LpStatus::Optimal)
      throw NumericalError("eval: adversary solve failed");
    out.cert.c = hs->c_nominal + res.x.head(n);
  }
  double best = kInf;
  for (const auto& yj : completions) {
    const double v = out.cert.c.dot(yj);
    if (v < best) {
      best = v;
      out.y = yj;
    }
  }
  out.cert.attained = best;
  out.value = first + best;
  return out;
}

// recourse polytope for a fixed binary first stage: variables y only
LpProblem recourse_polytope(const Instance& inst, const Vector& x) {
  const int n = inst.item_count();
  const LinearSystem sys = build_linear_system(inst.structure, n);
  LpProblem lp = LpProblem::with_vars(n, LpSense::Minimize);
  const Vector rhs = sys.rhs - sys.lhs * x;
  for (int r = 0; r < sys.rhs.size(); ++r)
    lp.add_row(sys.lhs.row(r), to_lp(sys.relations[r]), rhs[r]);
  lp.upper = (Vector::Ones(n) - x).cwiseMax(0.0);
  return lp;
}

EvalResult eval_polyhedral(const Instance& inst, const HalfspaceView& hs,
                           const Vector& x) {
  const int n = inst.item_count();
  const int m = static_cast<int>(hs.b.size());
  LpProblem lp = recourse_polytope(inst, x);
  const int structural_rows = lp.row_count();
  // append dual variables u and the coupling block  (A^T u)_i - y_i >= 0
  lp.objective.conservativeResize(n + m);
  lp.objective.head(n) = hs.c_nominal;
  lp.objective.tail(m) = hs.b;
  lp.lower.conservativeResize(n + m);
  lp.lower.tail(m).setZero();
  lp.upper.conservativeResize(n + m);
  lp.upper.tail(m).setConstant(kInf);
  lp.lhs.conservativeResize(lp.lhs.rows(), n + m);
  lp.lhs.rightCols(m).setZero();
  for (int i = 0; i < n; ++i) {
    Vector row = Vector::Zero(n + m);
    row[i] = -1.0;
    row.tail(m) = hs.A.col(i);
    lp.add_row(row, LpRelation::GreaterEqual, 0.0);
  }
  const LpResult res = lp_solve(lp);
  if (res.status == LpStatus::Infeasible)
    throw InfeasibleError("eval: first stage admits no recourse");
  if (res.status != LpStatus::Optimal)
    throw NumericalError("eval: recourse solve failed");
  EvalResult out;
  out.y = res.x.head(n);
  // duals of the coupling rows are an optimal deviation
  Vector delta(n);
  for (int i = 0; i < n; ++i)
    delta[i] = std::max(0.0, res.duals[structural_rows + i]);
  out.cert.c = hs.c_nominal + delta;
  out.cert.attained = out.cert.c.dot(out.y);
  out.value = inst.first_stage_costs.dot(x) + res.objective;
  return out;
}

EvalResult eval_vertices(const Instance& inst, const VPolytope& vp,
                         const Vector& x) {
  const int n = inst.item_count();
  const int k = static_cast<int>(vp.vertices.size());
  LpProblem lp = recourse_polytope(inst, x);
  const int structural_rows = lp.row_count();
  // epigraph variable t with rows  t - c_k^T y >= 0
  lp.objective.conservativeResize(n + 1);
  lp.objective.head(n).setZero();
  lp.objective[n] = 1.0;
  lp.lower.conservativeResize(n + 1);
  lp.lower[n] = -kInf;
  lp.upper.conservativeResize(n + 1);
  lp.upper[n] = kInf;
  lp.lhs.conservativeResize(lp.lhs.rows(), n + 1);
  lp.lhs.rightCols(1).setZero();
  for (int j = 0; j < k; ++j) {
    Vector row = Vector::Zero(n + 1);
    row.head(n) = -vp.vertices[j];
    row[n] = 1.0;
    lp.add_row(row, LpRelation::GreaterEqual, 0.0);
  }
  const LpResult res = lp_solve(lp);
  if (res.status == LpStatus::Infeasible)
    throw InfeasibleError("eval: first stage admits no recourse");
  if (res.status != LpStatus::Optimal)
    throw NumericalError("eval: recourse solve failed");
  EvalResult out;
  out.y = res.x.head(n);
  Vector lambda(k);
  for (int j = 0; j < k; ++j)
    lambda[j] = std::max(0.0, res.duals[structural_rows + j]);
  const double total = lambda.sum();
  if (total > kTol)
    lambda /= total;
  else
    lambda = Vector::Unit(k, 0);
  out.cert.c = Vector::Zero(n);
  for (int j = 0; j < k; ++j) out.cert.c += lambda[j] * vp.vertices[j];
  out.cert.attained = out.cert.c.dot(out.y);
  out.value = inst.first_stage_costs.dot(x) + res.objective;
  return out;
}

EvalResult eval_ellipsoid(const Instance& inst, const Ellipsoid& el,
                          const Vector& x) {
  LpProblem lp = recourse_polytope(inst, x);
  lp.objective = el.c_nominal;
  FwOptions opts;
  opts.gap_tol_scale = 1e-9;
  const FwResult fw = fw_solve(lp, el.A, opts);
  if (fw.status == LpStatus::Infeasible)
    throw InfeasibleError("eval: first stage admits no recourse");
  EvalResult out;
  out.y = fw.x;
  const Vector w = el.A.transpose() * fw.x;
  Vector delta = Vector::Zero(w.size());
  if (w.norm() > kTol) delta = w / w.norm();
  out.cert.c = el.c_nominal + el.A * delta;
  out.cert.attained = out.cert.c.dot(out.y);
  out.value = inst.first_stage_costs.dot(x) + fw.value;
  return out;
}

}  // namespace

MipModel build_compact_model(const Instance& inst) {
  const int n = inst.item_count();
  const LinearSystem sys = build_linear_system(inst.structure, n);
  const int structural = static_cast<int>(sys.rhs.size());
  MipModel model;
  model.binary_vars.resize(n);
  std::iota(model.binary_vars.begin(), model.binary_vars.end(), 0);

  const auto base_rows = [&](LpProblem& lp) {
    const int nv = lp.var_count();
    for (int r = 0; r < structural; ++r) {
      Vector row = Vector::Zero(nv);
      row.head(n) = sys.lhs.row(r);
      row.segment(n, n) = sys.lhs.row(r);
      lp.add_row(row, to_lp(sys.relations[r]), sys.rhs[r]);
    }
    for (int i = 0; i < n; ++i) {
      Vector row = Vector::Zero(nv);
      row[i] = 1.0;
      row[n + i] = 1.0;
      lp.add_row(row, LpRelation::LessEqual, 1.0);
    }
    lp.upper.head(n).setOnes();
  };

  if (const auto* vp = std::get_if<VPolytope>(&inst.uncertainty)) {
    const int k = static_cast<int>(vp->vertices.size());
    LpProblem lp = LpProblem::with_vars(2 * n + 1, LpSense::Minimize);
    lp.objective.head(n) = inst.first_stage_costs;
    lp.objective[2 * n] = 1.0;
    lp.lower[2 * n] = -kInf;
    base_rows(lp);
    for (int j = 0; j < k; ++j) {
      Vector row = Vector::Zero(2 * n + 1);
      row.segment(n, n) = -vp->vertices[j];
      row[2 * n] = 1.0;
      lp.add_row(row, LpRelation::GreaterEqual, 0.0);
    }
    model.relaxation = std::move(lp);
    return model;
  }
  if (const auto* el = std::get_if<Ellipsoid>(&inst.uncertainty)) {
    LpProblem lp = LpProblem::with_vars(2 * n, LpSense::Minimize);
    lp.objective.head(n) = inst.first_stage_costs;
    lp.objective.tail(n) = el->c_nominal;
    base_rows(lp);
    model.relaxation = std::move(lp);
    model.norm_q = Matrix::Zero(2 * n, el->A.cols());
    model.norm_q.bottomRows(n) = el->A;
    model.has_norm = true;
    return model;
  }
  const auto hs = halfspace_form(inst.uncertainty);
  if (!hs) throw ValidationError("exact: unsupported uncertainty family");
  const int m = static_cast<int>(hs->b.size());
  LpProblem lp = LpProblem::with_vars(2 * n + m, LpSense::Minimize);
  lp.objective.head(n) = inst.first_stage_costs;
  lp.objective.segment(n, n) = hs->c_nominal;
  lp.objective.tail(m) = hs->b;
  base_rows(lp);
  for (int i = 0; i < n; ++i) {
    Vector row = Vector::Zero(2 * n + m);
    row[n + i] = -1.0;
    row.tail(m) = hs->A.col(i);
    lp.add_row(row, LpRelation::GreaterEqual, 0.0);
  }
  model.relaxation = std::move(lp);
  return model;
}

EvalResult eval(const Instance& inst, const Vector& x) {
  check_first_stage(inst, x);
  if (const auto* st = std::get_if<SpanningTree>(&inst.structure))
    return eval_tree(inst, *st, x);
  if (const auto* vp = std::get_if<VPolytope>(&inst.uncertainty))
    return eval_vertices(inst, *vp, x);
  if (const auto* el = std::get_if<Ellipsoid>(&inst.uncertainty))
    return eval_ellipsoid(inst, *el, x);
  const auto hs = halfspace_form(inst.uncertainty);
  if (!hs) throw ValidationError("eval: unsupported uncertainty family");
  return eval_polyhedral(inst, *hs, x);
}

TwoStageSolution solve_exact(const Instance& inst, int max_items,
                             BnbReport* report) {
  const int n = inst.item_count();
  if (n > max_items)
    throw ValidationError("solve_exact: instance exceeds the size cap");
  const MipModel model = build_compact_model(inst);
  const BnbReport bnb = bnb_solve(model);
  if (report) *report = bnb;
  if (bnb.status != LpStatus::Optimal)
    throw InfeasibleError("solve_exact: no feasible solution");
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = std::round(bnb.x[i]);
  const EvalResult ev = eval(inst, x);
  TwoStageSolution sol;
  sol.x = x;
  sol.y = incremental(inst.structure, x, ev.cert.c).y;
  sol.value = ev.value;
  sol.worst_scenario = ev.cert.c;
  return sol;
}

double relaxation_value(const Instance& inst) {
  const MipModel model = build_compact_model(inst);
  if (model.has_norm) {
    FwOptions opts;
    opts.gap_tol_scale = 1e-9;
    const FwResult fw = fw_solve(model.relaxation, model.norm_q, opts);
    if (fw.status != LpStatus::Optimal)
      throw InfeasibleError("relaxation: no feasible solution");
    return fw.value;
  }
  const LpResult res = lp_solve(model.relaxation);
  if (res.status != LpStatus::Optimal)
    throw InfeasibleError("relaxation: no feasible solution");
  return res.objective;
}

}  // namespace rtst
