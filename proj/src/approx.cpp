#include "rtst/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rtst/deterministic.hpp"
#include "rtst/exact.hpp"
#include "rtst/frank_wolfe.hpp"
#include "rtst/mip.hpp"
#include "rtst/model.hpp"
#include "rtst/simplex.hpp"
#include "rtst/subproblems.hpp"
#include "rtst/uncertainty.hpp"

namespace rtst {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

LpRelation to_lp(Relation rel) {
  return rel == Relation::Equal ? LpRelation::Equal : LpRelation::GreaterEqual;
}

Vector round_binary(const Vector& v) {
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = std::round(v[i]);
  return out;
}

int grid_steps(double eps) {
  if (!(eps > 0.0) || eps > 1.0 + kTol)
    throw ValidationError("grid: eps must lie in (0, 1]");
  const double raw = 1.0 / eps;
  const int t = static_cast<int>(std::lround(raw));
  if (std::abs(raw - t) > 1e-6)
    throw ValidationError("grid: 1/eps must be an integer");
  return t;
}

// Items of each group ranked by first-stage cost; ties keep the lower index.
int cheapest_in(const std::vector<int>& group, const Vector& costs) {
  int best = group.front();
  for (int j : group)
    if (costs[j] < costs[best]) best = j;
  return best;
}

}  // namespace

std::pair<Bounds, ApproxResult> lb_ub_minmax(const Instance& inst) {
  const int n = inst.item_count();
  MipModel model = build_compact_model(inst);
  for (int i = 0; i < n; ++i) model.binary_vars.push_back(n + i);
  const double lb = relaxation_value(inst);
  const BnbReport rep = bnb_solve(model);
  if (rep.status != LpStatus::Optimal)
    throw InfeasibleError("lb_ub_minmax: no feasible binary stage pair");

  Bounds bounds;
  bounds.lower = lb;
  bounds.upper = rep.value;
  if (std::abs(lb) <= kTol && std::abs(rep.value) <= kTol)
    bounds.ratio = 1.0;
  else if (lb <= kTol)
    bounds.ratio = kInf;
  else
    bounds.ratio = rep.value / lb;

  ApproxResult res;
  res.x = round_binary(rep.x.head(n));
  res.y = round_binary(rep.x.segment(n, n));
  res.value = eval(inst, res.x).value;
  res.guarantee = bounds.ratio;
  res.lower_bound = lb;
  res.minmax_objective = rep.value;
  return {bounds, res};
}

ApproxResult minmax_hp0(const Instance& inst) {
  const auto* bu = std::get_if<Budgeted>(&inst.uncertainty);
  if (!bu) throw ValidationError("minmax_hp0: needs budgeted uncertainty");
  const TwoStageSolution nominal = two_stage(inst, bu->c_nominal);
  const TwoStageSolution deviated = two_stage(inst, bu->c_nominal + bu->d);
  const double via_nominal = nominal.value + bu->gamma;
  const TwoStageSolution& best =
      via_nominal <= deviated.value ? nominal : deviated;

  ApproxResult res;
  res.x = best.x;
  res.y = best.y;
  res.minmax_objective = std::min(via_nominal, deviated.value);
  res.value = eval(inst, res.x).value;
  return res;
}

ApproxResult scenario_approx(const Instance& inst, const Vector& c_tilde) {
  if (c_tilde.size() != inst.item_count())
    throw ValidationError("scenario_approx: scenario size mismatch");
  if (!contains(inst.uncertainty, c_tilde))
    throw ValidationError("scenario_approx: scenario lies outside the set");
  const TwoStageSolution ts = two_stage(inst, c_tilde);
  const Vector maxima = coordinate_max(inst.uncertainty);
  double t = 1.0;
  for (Eigen::Index i = 0; i < c_tilde.size(); ++i) {
    if (c_tilde[i] > 1e-9)
      t = std::max(t, maxima[i] / c_tilde[i]);
    else if (maxima[i] > 1e-9)
      t = kInf;
  }

  ApproxResult res;
  res.x = ts.x;
  res.y = ts.y;
  res.value = eval(inst, res.x).value;
  res.guarantee = t;
  return res;
}

BestScenario best_t_scenario(const Instance& inst) {
  const int n = inst.item_count();
  const Vector maxima = coordinate_max(inst.uncertainty);
  if (maxima.maxCoeff() <= 1e-9)
    throw ValidationError("best_t_scenario: uncertainty set is all zero");

  Vector c_tilde;
  if (const auto hs = halfspace_form(inst.uncertainty)) {
    // max s  s.t.  A delta <= b,  delta_i - s m_i >= -c_nominal_i.
    const int m = static_cast<int>(hs->b.size());
    LpProblem lp = LpProblem::with_vars(n + 1, LpSense::Maximize);
    lp.objective[n] = 1.0;
    lp.upper[n] = 1.0;
    for (int r = 0; r < m; ++r) {
      Vector row = Vector::Zero(n + 1);
      row.head(n) = hs->A.row(r);
      lp.add_row(row, LpRelation::LessEqual, hs->b[r]);
    }
    for (int i = 0; i < n; ++i) {
      Vector row = Vector::Zero(n + 1);
      row[i] = 1.0;
      row[n] = -maxima[i];
      lp.add_row(row, LpRelation::GreaterEqual, -hs->c_nominal[i]);
    }
    const LpResult res = lp_solve(lp);
    if (res.status != LpStatus::Optimal)
      throw NumericalError("best_t_scenario: scaling program failed");
    c_tilde = hs->c_nominal + res.x.head(n);
  } else if (const auto* vp = std::get_if<VPolytope>(&inst.uncertainty)) {
    const int k = static_cast<int>(vp->vertices.size());
    LpProblem lp = LpProblem::with_vars(k + 1, LpSense::Maximize);
    lp.objective[k] = 1.0;
    lp.upper.head(k).setOnes();
    lp.upper[k] = 1.0;
    Vector ones = Vector::Zero(k + 1);
    ones.head(k).setOnes();
    lp.add_row(ones, LpRelation::Equal, 1.0);
    for (int i = 0; i < n; ++i) {
      Vector row = Vector::Zero(k + 1);
      for (int j = 0; j < k; ++j) row[j] = vp->vertices[j][i];
      row[k] = -maxima[i];
      lp.add_row(row, LpRelation::GreaterEqual, 0.0);
    }
    const LpResult res = lp_solve(lp);
    if (res.status != LpStatus::Optimal)
      throw NumericalError("best_t_scenario: scaling program failed");
    c_tilde = Vector::Zero(n);
    for (int j = 0; j < k; ++j) c_tilde += res.x[j] * vp->vertices[j];
  } else {
    const auto* ell = std::get_if<Ellipsoid>(&inst.uncertainty);
    if (!ell) throw ValidationError("best_t_scenario: unsupported family");
    const int q = static_cast<int>(ell->A.cols());
    // Feasibility of {c in U : c >= s * maxima} by projected gradient on
    // the squared shortfall; s then maximized by bisection.
    const double step = 1.0 / std::max(1.0, ell->A.squaredNorm());
    auto shortfall_point = [&](double s, Vector& delta) {
      const Vector target = s * maxima - ell->c_nominal;
      delta = Vector::Zero(q);
      for (int it = 0; it < 600; ++it) {
        const Vector r = (target - ell->A * delta).cwiseMax(0.0);
        if (r.lpNorm<Eigen::Infinity>() <= 1e-6) return true;
        delta += step * (ell->A.transpose() * r);
        const double nrm = delta.norm();
        if (nrm > 1.0) delta /= nrm;
      }
      const Vector r = (target - ell->A * delta).cwiseMax(0.0);
      return r.lpNorm<Eigen::Infinity>() <= 1e-6;
    };
    Vector best_delta = Vector::Zero(q);
    Vector probe;
    double lo = 0.0, hi = 1.0;
    if (shortfall_point(1.0, probe)) {
      lo = 1.0;
      best_delta = probe;
    } else {
      for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (shortfall_point(mid, probe)) {
          lo = mid;
          best_delta = probe;
        } else {
          hi = mid;
        }
      }
    }
    c_tilde = (ell->c_nominal + ell->A * best_delta).cwiseMax(0.0);
  }

  BestScenario out;
  out.c_tilde = c_tilde;
  out.t = 1.0;
  for (int i = 0; i < n; ++i) {
    if (c_tilde[i] > 1e-9)
      out.t = std::max(out.t, maxima[i] / c_tilde[i]);
    else if (maxima[i] > 1e-9)
      out.t = kInf;
  }
  return out;
}

ApproxResult fptas(const Instance& inst, double eps) {
  const auto* mb = std::get_if<MultiBudget>(&inst.uncertainty);
  if (!mb) throw ValidationError("fptas: needs a multi-budget family");
  if (!std::holds_alternative<Selection>(inst.structure) &&
      !std::holds_alternative<RepSelection>(inst.structure) &&
      !std::holds_alternative<ShortestPath>(inst.structure))
    throw ValidationError("fptas: unsupported structure");
  const int n = inst.item_count();
  const int steps = grid_steps(eps);
  const int k = static_cast<int>(mb->subsets.size());
  double cells = 1.0;
  for (int j = 0; j < k; ++j) cells *= steps + 1;
  if (cells > 2e6)
    throw ValidationError("fptas: dual grid too large for the subset count");

  std::vector<std::vector<int>> covering(n);
  for (int j = 0; j < k; ++j)
    for (int i : mb->subsets[j]) covering[i].push_back(j);

  CappedSubproblem sub;
  sub.structure = inst.structure;
  sub.first_stage_costs = inst.first_stage_costs;
  sub.c_nominal = mb->c_nominal;

  double best = kInf;
  CappedSolution best_sol;
  std::vector<int> units(k, 0);
  while (true) {
    double price_cost = 0.0;
    for (int j = 0; j < k; ++j) price_cost += units[j] * eps * mb->budgets[j];
    sub.caps = Vector::Zero(n);
    for (int i = 0; i < n; ++i) {
      int total = 0;
      for (int j : covering[i]) total += units[j];
      sub.caps[i] = std::min(total, steps) * eps;
    }
    CappedSolution sol;
    if (std::holds_alternative<Selection>(inst.structure))
      sol = capped_selection_dp(sub, eps);
    else if (std::holds_alternative<RepSelection>(inst.structure))
      sol = capped_rs_greedy(sub);
    else
      sol = capped_sp_multigraph(sub);
    if (sol.value + price_cost < best) {
      best = sol.value + price_cost;
      best_sol = std::move(sol);
    }
    int pos = k - 1;
    while (pos >= 0 && units[pos] == steps) units[pos--] = 0;
    if (pos < 0) break;
    ++units[pos];
  }

  ApproxResult res;
  res.x = round_binary(best_sol.x);
  res.y = best_sol.y;
  res.value = eval(inst, res.x).value;
  res.guarantee = 1.0 + eps;
  res.minmax_objective =
      inst.first_stage_costs.dot(res.x) +
      support_max(inst.uncertainty, res.y).value;
  return res;
}

ApproxResult ellipsoid_l1_approx(const Instance& inst) {
  const auto* ell = std::get_if<Ellipsoid>(&inst.uncertainty);
  if (!ell) throw ValidationError("ellipsoid_l1_approx: needs an ellipsoid");
  const int n = inst.item_count();
  const int q = static_cast<int>(ell->A.cols());
  const LinearSystem sys = build_linear_system(inst.structure, n);
  const int rows = static_cast<int>(sys.rhs.size());

  // Variables [x | y | z]; z_k bounds the k-th coordinate of A'y from both
  // sides, so the objective charges the absolute sum instead of the norm.
  MipModel model;
  LpProblem& lp = model.relaxation;
  lp = LpProblem::with_vars(2 * n + q);
  lp.objective.head(n) = inst.first_stage_costs;
  lp.objective.segment(n, n) = ell->c_nominal;
  lp.objective.tail(q).setOnes();
  lp.upper.head(2 * n).setOnes();
  for (int r = 0; r < rows; ++r) {
    Vector row = Vector::Zero(2 * n + q);
    row.head(n) = sys.lhs.row(r);
    row.segment(n, n) = sys.lhs.row(r);
    lp.add_row(row, to_lp(sys.relations[r]), sys.rhs[r]);
  }
  for (int i = 0; i < n; ++i) {
    Vector row = Vector::Zero(2 * n + q);
    row[i] = 1.0;
    row[n + i] = 1.0;
    lp.add_row(row, LpRelation::LessEqual, 1.0);
  }
  for (int c = 0; c < q; ++c) {
    for (const double sign : {1.0, -1.0}) {
      Vector row = Vector::Zero(2 * n + q);
      row.segment(n, n) = sign * ell->A.col(c);
      row[2 * n + c] = 1.0;
      lp.add_row(row, LpRelation::GreaterEqual, 0.0);
    }
  }
  for (int i = 0; i < n; ++i) model.binary_vars.push_back(i);

  const BnbReport rep = bnb_solve(model);
  if (rep.status != LpStatus::Optimal)
    throw InfeasibleError("ellipsoid_l1_approx: model infeasible");

  ApproxResult res;
  res.x = round_binary(rep.x.head(n));
  res.y = rep.x.segment(n, n);
  res.value = eval(inst, res.x).value;
  res.guarantee = std::sqrt(static_cast<double>(q));
  return res;
}

ApproxResult ellipsoid_nonneg_approx(const Instance& inst) {
  const auto* ell = std::get_if<Ellipsoid>(&inst.uncertainty);
  if (!ell) throw ValidationError("ellipsoid_nonneg_approx: needs an ellipsoid");
  if ((ell->A.array() < -kTol).any())
    throw ValidationError("ellipsoid_nonneg_approx: matrix has negative entries");
  const int q = static_cast<int>(ell->A.cols());
  // For nonnegative A and y, ||A'y||_1 charges each item its row sum.
  const Vector merged =
      ell->c_nominal + ell->A.cwiseMax(0.0) * Vector::Ones(q);
  const TwoStageSolution ts = two_stage(inst, merged);

  ApproxResult res;
  res.x = ts.x;
  res.y = ts.y;
  res.value = eval(inst, res.x).value;
  res.guarantee = std::sqrt(static_cast<double>(q));
  return res;
}

ApproxResult round_selection(const Instance& inst) {
  const auto* sel = std::get_if<Selection>(&inst.structure);
  if (!sel) throw ValidationError("round_selection: structure is not a selection");
  const int n = inst.item_count();
  const int p = sel->p;

  Vector ys;
  double relax_value = 0.0;
  double relax_lower = 0.0;
  if (const auto hs = halfspace_form(inst.uncertainty)) {
    const int m = static_cast<int>(hs->b.size());
    LpProblem lp = LpProblem::with_vars(2 * n + m);
    lp.objective.head(n) = inst.first_stage_costs;
    lp.objective.segment(n, n) = hs->c_nominal;
    lp.objective.tail(m) = hs->b;
    lp.upper.head(2 * n).setOnes();
    Vector total = Vector::Zero(2 * n + m);
    total.head(2 * n).setOnes();
    lp.add_row(total, LpRelation::Equal, static_cast<double>(p));
    for (int i = 0; i < n; ++i) {
      Vector row = Vector::Zero(2 * n + m);
      row[i] = 1.0;
      row[n + i] = 1.0;
      lp.add_row(row, LpRelation::LessEqual, 1.0);
    }
    for (int i = 0; i < n; ++i) {
      Vector row = Vector::Zero(2 * n + m);
      row[n + i] = -1.0;
      row.tail(m) = hs->A.col(i);
      lp.add_row(row, LpRelation::GreaterEqual, 0.0);
    }
    const LpResult res = lp_solve(lp);
    if (res.status != LpStatus::Optimal)
      throw InfeasibleError("round_selection: relaxation not solvable");
    ys = res.x.segment(n, n);
    relax_value = res.objective;
    relax_lower = res.objective;
  } else if (const auto* ell = std::get_if<Ellipsoid>(&inst.uncertainty)) {
    const int q = static_cast<int>(ell->A.cols());
    LpProblem lp = LpProblem::with_vars(2 * n);
    lp.objective.head(n) = inst.first_stage_costs;
    lp.objective.segment(n, n) = ell->c_nominal;
    lp.upper.setOnes();
    Vector total = Vector::Ones(2 * n);
    lp.add_row(total, LpRelation::Equal, static_cast<double>(p));
    for (int i = 0; i < n; ++i) {
      Vector row = Vector::Zero(2 * n);
      row[i] = 1.0;
      row[n + i] = 1.0;
      lp.add_row(row, LpRelation::LessEqual, 1.0);
    }
    Matrix norm_q = Matrix::Zero(2 * n, q);
    norm_q.bottomRows(n) = ell->A;
    FwOptions opts;
    opts.gap_tol_scale = 1e-9;
    opts.max_iters = 200000;
    const FwResult fw = fw_solve(lp, norm_q, opts);
    if (fw.status != LpStatus::Optimal)
      throw InfeasibleError("round_selection: relaxation not solvable");
    ys = fw.x.segment(n, n);
    relax_value = fw.value;
    relax_lower = fw.lower_bound;
  } else {
    throw ValidationError(
        "round_selection: needs a halfspace or ellipsoid family");
  }
  (void)relax_value;

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return inst.first_stage_costs[a] < inst.first_stage_costs[b];
  });

  // Rebuild the first stage greedily: cheapest items soak up the mass the
  // recourse leaves open, so every item before the last loaded one is full.
  double budget = p - ys.sum();
  if (budget < -1e-6)
    throw NumericalError("round_selection: relaxation mass exceeds p");
  budget = std::max(budget, 0.0);
  Vector xs = Vector::Zero(n);
  for (int i : order) {
    const double take = std::min(budget, std::max(0.0, 1.0 - ys[i]));
    xs[i] = take;
    budget -= take;
  }
  if (std::abs(budget) > 1e-6)
    throw NumericalError("round_selection: first-stage mass unassigned");
  int last_pos = -1;
  for (int pos = 0; pos < n; ++pos)
    if (xs[order[pos]] > 1e-9) last_pos = pos;
  for (int pos = 0; pos < last_pos; ++pos) {
    const int i = order[pos];
    if (std::abs(xs[i] + ys[i] - 1.0) > 1e-6)
      throw NumericalError("round_selection: prefix saturation violated");
  }

  Vector xh = Vector::Zero(n), yh = Vector::Zero(n);
  double remaining = p;
  for (int pos = 0; pos < n; ++pos) {
    const int i = order[pos];
    if (pos < last_pos) {
      if (xs[i] >= 0.5)
        xh[i] = 1.0;
      else
        yh[i] = 1.0;
      remaining -= 1.0;
    } else if (pos == last_pos) {
      if (xs[i] >= 0.5) {
        xh[i] = 1.0;
        remaining -= 1.0;
      } else {
        yh[i] = std::min(1.0, 2.0 * ys[i]);
        remaining -= yh[i];
      }
    } else {
      yh[i] = std::min({1.0, 2.0 * ys[i], std::max(remaining, 0.0)});
      remaining -= yh[i];
    }
  }
  if (std::abs(remaining) > 1e-6)
    throw NumericalError("round_selection: rounded mass misses p");

  ApproxResult res;
  res.x = xh;
  res.y = yh;
  res.value = inst.first_stage_costs.dot(xh) +
              support_max(inst.uncertainty, yh).value;
  res.guarantee = 2.0;
  res.lower_bound = relax_lower;
  return res;
}

ApproxResult round_rs(const Instance& inst) {
  const auto* rs = std::get_if<RepSelection>(&inst.structure);
  if (!rs) throw ValidationError("round_rs: structure is not rep-selection");
  const int n = inst.item_count();
  const int groups = static_cast<int>(rs->groups.size());
  Vector c_hat(groups);
  for (int l = 0; l < groups; ++l)
    c_hat[l] = inst.first_stage_costs[cheapest_in(rs->groups[l],
                                                  inst.first_stage_costs)];

  // Reduced relaxation over one first-stage variable per group.
  Vector xg, ys;
  double relax_lower = 0.0;
  if (const auto hs = halfspace_form(inst.uncertainty)) {
    const int m = static_cast<int>(hs->b.size());
    LpProblem lp = LpProblem::with_vars(groups + n + m);
    lp.objective.head(groups) = c_hat;
    lp.objective.segment(groups, n) = hs->c_nominal;
    lp.objective.tail(m) = hs->b;
    lp.upper.head(groups + n).setOnes();
    for (int l = 0; l < groups; ++l) {
      Vector row = Vector::Zero(groups + n + m);
      row[l] = 1.0;
      for (int j : rs->groups[l]) row[groups + j] = 1.0;
      lp.add_row(row, LpRelation::Equal, 1.0);
    }
    for (int i = 0; i < n; ++i) {
      Vector row = Vector::Zero(groups + n + m);
      row[groups + i] = -1.0;
      row.tail(m) = hs->A.col(i);
      lp.add_row(row, LpRelation::GreaterEqual, 0.0);
    }
    const LpResult res = lp_solve(lp);
    if (res.status != LpStatus::Optimal)
      throw InfeasibleError("round_rs: relaxation not solvable");
    xg = res.x.head(groups);
    ys = res.x.segment(groups, n);
    relax_lower = res.objective;
  } else if (const auto* ell = std::get_if<Ellipsoid>(&inst.uncertainty)) {
    const int q = static_cast<int>(ell->A.cols());
    LpProblem lp = LpProblem::with_vars(groups + n);
    lp.objective.head(groups) = c_hat;
    lp.objective.tail(n) = ell->c_nominal;
    lp.upper.setOnes();
    for (int l = 0; l < groups; ++l) {
      Vector row = Vector::Zero(groups + n);
      row[l] = 1.0;
      for (int j : rs->groups[l]) row[groups + j] = 1.0;
      lp.add_row(row, LpRelation::Equal, 1.0);
    }
    Matrix norm_q = Matrix::Zero(groups + n, q);
    norm_q.bottomRows(n) = ell->A;
    FwOptions opts;
    opts.gap_tol_scale = 1e-9;
    opts.max_iters = 200000;
    const FwResult fw = fw_solve(lp, norm_q, opts);
    if (fw.status != LpStatus::Optimal)
      throw InfeasibleError("round_rs: relaxation not solvable");
    xg = fw.x.head(groups);
    ys = fw.x.segment(groups, n);
    relax_lower = fw.lower_bound;
  } else {
    throw ValidationError("round_rs: needs a halfspace or ellipsoid family");
  }

  Vector xh = Vector::Zero(n), yh = Vector::Zero(n);
  for (int l = 0; l < groups; ++l) {
    if (xg[l] >= 0.5) {
      xh[cheapest_in(rs->groups[l], inst.first_stage_costs)] = 1.0;
      continue;
    }
    double mass = 0.0;
    for (int j : rs->groups[l]) mass += ys[j];
    for (int j : rs->groups[l]) yh[j] = ys[j] / mass;
  }

  ApproxResult res;
  res.x = xh;
  res.y = yh;
  res.value = inst.first_stage_costs.dot(xh) +
              support_max(inst.uncertainty, yh).value;
  res.guarantee = 2.0;
  res.lower_bound = relax_lower;
  return res;
}

TwoStageSolution rs_hp0_exact(const Instance& inst) {
  const auto* rs = std::get_if<RepSelection>(&inst.structure);
  const auto* bu = std::get_if<Budgeted>(&inst.uncertainty);
  if (!rs || !bu)
    throw ValidationError(
        "rs_hp0_exact: needs rep-selection under budgeted uncertainty");
  const int n = inst.item_count();

  // Modes per item: nominal rate capped by pi, deviated rate by 1 - pi; each
  // group packs one unit of mass by cheapest rate or takes its first stage.
  auto solve_at = [&](double pi, Vector* x_out, Vector* y_out) {
    double total = bu->gamma * pi;
    for (const auto& group : rs->groups) {
      struct Mode {
        double rate;
        int kind;  // 0 nominal, 1 deviated
        int item;
      };
      std::vector<Mode> modes;
      modes.reserve(2 * group.size());
      for (int j : group) {
        modes.push_back({bu->c_nominal[j], 0, j});
        modes.push_back({bu->c_nominal[j] + bu->d[j], 1, j});
      }
      std::sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) {
        if (a.rate != b.rate) return a.rate < b.rate;
        if (a.kind != b.kind) return a.kind < b.kind;
        return a.item < b.item;
      });
      double need = 1.0;
      double pack_cost = 0.0;
      std::vector<std::pair<int, double>> takes;
      for (const auto& mode : modes) {
        if (need <= 1e-12) break;
        const double cap = mode.kind == 0 ? pi : 1.0 - pi;
        const double take = std::min(cap, need);
        if (take <= 0.0) continue;
        takes.emplace_back(mode.item, take);
        pack_cost += mode.rate * take;
        need -= take;
      }
      const int cheapest = cheapest_in(group, inst.first_stage_costs);
      if (inst.first_stage_costs[cheapest] <= pack_cost + kTol) {
        total += inst.first_stage_costs[cheapest];
        if (x_out) (*x_out)[cheapest] = 1.0;
      } else {
        total += pack_cost;
        if (y_out)
          for (const auto& [j, take] : takes) (*y_out)[j] += take;
      }
    }
    return total;
  };

  std::vector<double> candidates{0.0, 1.0};
  for (int p = 2; p <= n; ++p) candidates.push_back(1.0 / p);
  double best = kInf;
  double best_pi = 0.0;
  for (double pi : candidates) {
    const double value = solve_at(pi, nullptr, nullptr);
    if (value < best) {
      best = value;
      best_pi = pi;
    }
  }

  TwoStageSolution out;
  out.x = Vector::Zero(n);
  out.y = Vector::Zero(n);
  out.value = solve_at(best_pi, &out.x, &out.y);
  out.worst_scenario = eval(inst, out.x).cert.c;
  return out;
}

}  // namespace rtst
