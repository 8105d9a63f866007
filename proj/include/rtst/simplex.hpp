#pragma once

#include "rtst/types.hpp"

namespace rtst {

enum class LpSense { Minimize, Maximize };
enum class LpRelation { LessEqual, GreaterEqual, Equal };
enum class LpStatus { Optimal, Infeasible, Unbounded };

// Dense LP in the form  opt c'x  s.t.  lhs x (<=|>=|=) rhs,  lower <= x <= upper.
// Bounds may be +-infinity; defaults are [0, +inf).
struct LpProblem {
  LpSense sense = LpSense::Minimize;
  Vector objective;
  Matrix lhs;  // row_count() x var_count()
  std::vector<LpRelation> relations;
  Vector rhs;
  Vector lower;
  Vector upper;

  int var_count() const { return static_cast<int>(objective.size()); }
  int row_count() const { return static_cast<int>(rhs.size()); }

  // Convenience: n variables, no rows yet, bounds [0, inf).
  static LpProblem with_vars(int n, LpSense sense = LpSense::Minimize);
  void add_row(const Vector& coeffs, LpRelation rel, double value);
};

struct LpResult {
  LpStatus status = LpStatus::Optimal;
  Vector x;
  double objective = 0;
  // One multiplier per input row (Optimal only). Sign convention follows the
  // Lagrangian of the problem as given: for a minimization, >=-rows carry
  // nonnegative duals and <=-rows nonpositive ones; flipped for maximization.
  Vector duals;
  // Full dual objective including variable-bound terms; equals `objective`
  // at optimality (strong duality).
  double dual_objective = 0;
  long iterations = 0;
};

// Two-phase primal simplex on a dense tableau. Deterministic: Dantzig pricing
// with lowest-index tie breaks, switching to Bland's rule after 1e4
// iterations; throws NumericalError past 1e6 iterations.
LpResult lp_solve(const LpProblem& problem);

}  // namespace rtst
