#pragma once

// Vertex-enumeration LP oracle for tests. Requires every variable to carry
// finite bounds so the feasible set is a polytope; enumerates all candidate
// bases (n-subsets of rows-as-equalities plus active bounds), keeps the best
// feasible solution. Independent of the simplex implementation under test.

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "rtst/simplex.hpp"

namespace rtst::testing {

struct BruteLpResult {
  bool feasible = false;
  double objective = 0;
  Vector x;
};

inline bool brute_point_feasible(const LpProblem& p, const Vector& x,
                                 double tol) {
  for (int j = 0; j < p.var_count(); ++j)
    if (x[j] < p.lower[j] - tol || x[j] > p.upper[j] + tol) return false;
  for (int i = 0; i < p.row_count(); ++i) {
    const double v = p.lhs.row(i).dot(x);
    switch (p.relations[i]) {
      case LpRelation::LessEqual:
        if (v > p.rhs[i] + tol) return false;
        break;
      case LpRelation::GreaterEqual:
        if (v < p.rhs[i] - tol) return false;
        break;
      case LpRelation::Equal:
        if (std::abs(v - p.rhs[i]) > tol) return false;
        break;
    }
  }
  return true;
}

inline BruteLpResult brute_lp(const LpProblem& p, double tol = 1e-7) {
  const int n = p.var_count();
  const int m = p.row_count();

  // candidate tight constraints: every row, then x_j = lower, x_j = upper
  struct Cand {
    Vector a;
    double b;
  };
  std::vector<Cand> cands;
  for (int i = 0; i < m; ++i) cands.push_back({p.lhs.row(i), p.rhs[i]});
  for (int j = 0; j < n; ++j) {
    Vector e = Vector::Zero(n);
    e[j] = 1.0;
    cands.push_back({e, p.lower[j]});
    cands.push_back({e, p.upper[j]});
  }

  BruteLpResult best;
  const bool maximize = p.sense == LpSense::Maximize;

  std::vector<int> idx(n);
  const int total = static_cast<int>(cands.size());

  // iterate over all n-subsets of candidate constraints
  for (int i = 0; i < n; ++i) idx[i] = i;
  if (total < n) return best;
  while (true) {
    Matrix a(n, n);
    Vector b(n);
    for (int i = 0; i < n; ++i) {
      a.row(i) = cands[idx[i]].a.transpose();
      b[i] = cands[idx[i]].b;
    }
    Eigen::FullPivLU<Matrix> lu(a);
    if (lu.isInvertible()) {
      const Vector x = lu.solve(b);
      if (brute_point_feasible(p, x, tol)) {
        const double obj = p.objective.dot(x);
        if (!best.feasible || (maximize ? obj > best.objective
                                        : obj < best.objective)) {
          best.feasible = true;
          best.objective = obj;
          best.x = x;
        }
      }
    }
    // next combination
    int k = n - 1;
    while (k >= 0 && idx[k] == total - n + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int i = k + 1; i < n; ++i) idx[i] = idx[i - 1] + 1;
  }
  return best;
}

}  // namespace rtst::testing
