#pragma once

#include <vector>

#include "rtst/simplex.hpp"
#include "rtst/types.hpp"

namespace rtst {

// Mixed-binary program: the relaxation plus a list of variables restricted to
// {0,1}. When has_norm is set the objective gains + ||norm_q^T v||_2 and node
// relaxations are solved by Frank-Wolfe instead of the simplex.
struct MipModel {
  LpProblem relaxation;
  std::vector<int> binary_vars;
  Matrix norm_q;
  bool has_norm = false;
};

struct BnbOptions {
  double integer_tol = 1e-6;
  long max_nodes = 1000000;
  int fw_node_iters = 400;
};

struct BnbReport {
  LpStatus status = LpStatus::Optimal;
  Vector x;                      // best point over all variables
  double value = 0.0;            // best objective
  double root_relaxation = 0.0;  // lower bound at the root node
  long node_count = 0;
};

// Best-first branch and bound: nodes ordered by bound, branching on the most
// fractional binary variable (ties lowest index). Frank-Wolfe node bounds
// subtract the duality gap so pruning stays valid.
BnbReport bnb_solve(const MipModel& model, const BnbOptions& opts = {});

}  // namespace rtst
