#include "rtst/oracle.hpp"

#include <limits>

#include "rtst/exact.hpp"
#include "rtst/model.hpp"
#include "rtst/simplex.hpp"

namespace rtst {

namespace {

Vector from_mask(unsigned mask, int n) {
  Vector v = Vector::Zero(n);
  for (int i = 0; i < n; ++i)
    if (mask & (1u << i)) v[i] = 1.0;
  return v;
}

// Worst case over the hull of the vertices against a finite recourse list:
// the value of the matrix game  max_{lam in simplex} min_j sum_k lam_k c_k'y_j.
// A vertex alone is not enough; the adversary may need a mixture.
double game_value(const std::vector<Vector>& vertices,
                  const std::vector<Vector>& recourses) {
  const int k = static_cast<int>(vertices.size());
  double pure = std::numeric_limits<double>::infinity();
  for (const Vector& y : recourses) {
    double best = 0.0;
    for (const Vector& c : vertices) best = std::max(best, c.dot(y));
    pure = std::min(pure, best);
  }
  if (k == 1 || recourses.size() == 1) return pure;

  // vars: lam (k) then t, maximize t
  LpProblem lp = LpProblem::with_vars(k + 1, LpSense::Maximize);
  lp.objective[k] = 1.0;
  lp.upper.head(k).setConstant(1.0);
  lp.upper[k] = pure + 1.0;
  Vector ones = Vector::Zero(k + 1);
  ones.head(k).setConstant(1.0);
  lp.add_row(ones, LpRelation::Equal, 1.0);
  for (const Vector& y : recourses) {
    Vector row(k + 1);
    for (int j = 0; j < k; ++j) row[j] = vertices[j].dot(y);
    row[k] = -1.0;
    lp.add_row(row, LpRelation::GreaterEqual, 0.0);
  }
  const LpResult res = lp_solve(lp);
  if (res.status != LpStatus::Optimal)
    throw NumericalError("oracle: adversary game solve failed");
  return res.x[k];
}

}  // namespace

OracleReport oracle_solve(const Instance& inst, int max_items,
                          bool keep_table) {
  const int n = inst.item_count();
  if (n > max_items)
    throw ValidationError("oracle: instance exceeds the enumeration limit");
  const auto* vp = std::get_if<VPolytope>(&inst.uncertainty);
  if (!vp && std::holds_alternative<SpanningTree>(inst.structure))
    throw ValidationError("oracle: spanning trees need vertex scenarios");

  // completions[x] holds the recourse masks of every feasible completion.
  std::vector<std::vector<unsigned>> completions(1u << n);
  for (unsigned z = 0; z < (1u << n); ++z) {
    if (!structure_feasible(inst.structure, n, from_mask(z, n))) continue;
    unsigned sub = z;
    while (true) {
      completions[sub].push_back(z ^ sub);
      if (sub == 0) break;
      sub = (sub - 1) & z;
    }
  }

  OracleReport report;
  report.value = std::numeric_limits<double>::infinity();
  report.notes = vp ? "vertex-exact" : "convex-eval";
  for (unsigned xm = 0; xm < (1u << n); ++xm) {
    if (completions[xm].empty()) continue;
    const Vector x = from_mask(xm, n);
    double worst;
    if (vp) {
      std::vector<Vector> recourses;
      recourses.reserve(completions[xm].size());
      for (unsigned ym : completions[xm]) recourses.push_back(from_mask(ym, n));
      worst = inst.first_stage_costs.dot(x) +
              game_value(vp->vertices, recourses);
    } else {
      worst = eval(inst, x).value;
    }
    if (keep_table) report.table.push_back({x, worst});
    if (worst < report.value) {
      report.value = worst;
      report.x = x;
    }
  }
  if (!std::isfinite(report.value))
    throw InfeasibleError("oracle: the structure admits no solution");
  return report;
}

}  // namespace rtst
