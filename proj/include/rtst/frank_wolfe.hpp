#pragma once

#include "rtst/simplex.hpp"
#include "rtst/types.hpp"

namespace rtst {

struct FwOptions {
  int max_iters = 100000;
  // stop once gap <= gap_tol_scale * (1 + |value|)
  double gap_tol_scale = 1e-6;
};

struct FwResult {
  LpStatus status = LpStatus::Optimal;
  Vector x;
  double value = 0.0;       // c^T x + ||Q^T x||, unsmoothed
  double lower_bound = 0.0; // valid lower bound on the true minimum
  double gap = 0.0;         // value - lower_bound
  int iterations = 0;
};

// Minimizes  c^T v + ||Q^T v||_2  over the polytope of `polytope` (its
// objective supplies c; sense must be Minimize). The kink is smoothed as
// sqrt(||Q^T v||^2 + mu^2) - mu with mu = 1e-7 (1 + ||Q||_F); linear
// minimization steps are simplex solves and the duality gap from them makes
// lower_bound valid for the unsmoothed problem.
FwResult fw_solve(const LpProblem& polytope, const Matrix& q,
                  const FwOptions& opts = {});

}  // namespace rtst
