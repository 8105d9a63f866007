#pragma once

#include <utility>

#include "rtst/types.hpp"

namespace rtst {

struct BestScenario {
  Vector c_tilde;
  double t = 1.0;
};

// Lower bound from the continuous min-max relaxation, upper bound and a
// first-stage solution from the min-max problem with binary recourse; the
// returned guarantee is upper/lower.
std::pair<Bounds, ApproxResult> lb_ub_minmax(const Instance& inst);

// Budgeted min-max shortcut: better of the nominal-plus-budget and the
// fully-deviated two-stage solves.
ApproxResult minmax_hp0(const Instance& inst);

// Two-stage solve under a fixed scenario from the set; the guarantee is the
// largest coordinate ratio max_i coordinate_max(U)_i / c_tilde_i.
ApproxResult scenario_approx(const Instance& inst, const Vector& c_tilde);

// Scenario minimizing that ratio: an LP for linearly-described families, a
// bisection over scaled coordinate maxima for ellipsoids.
BestScenario best_t_scenario(const Instance& inst);

// Grid scheme for multi-budget sets: enumerates dual price vectors on the
// eps-grid and solves a capped deterministic subproblem per cell. Factor
// 1 + eps; needs Selection, RepSelection or ShortestPath and integral 1/eps.
ApproxResult fptas(const Instance& inst, double eps);

// Linearized ellipsoid model: replaces the norm by its entrywise absolute
// sum and solves the resulting MIP. Factor sqrt(q) for an n x q matrix.
ApproxResult ellipsoid_l1_approx(const Instance& inst);

// Entrywise-nonnegative ellipsoids only: single two-stage solve under
// c_nominal + row sums of A. Factor sqrt(q).
ApproxResult ellipsoid_nonneg_approx(const Instance& inst);

// Threshold-1/2 rounding of the selection relaxation. Factor 2; the value is
// C'x + support_max(U, y) with the rounded, possibly fractional, recourse.
ApproxResult round_selection(const Instance& inst);

// Per-group rounding of the reduced representatives relaxation: majority
// groups go first stage, the rest keep their normalized recourse. Factor 2.
ApproxResult round_rs(const Instance& inst);

// Exact polynomial solver for representatives under budgeted uncertainty:
// scans the optimal dual price over {0, 1} u {1/p} and packs each group by
// rate. Matches branch and bound on every instance.
TwoStageSolution rs_hp0_exact(const Instance& inst);

}  // namespace rtst
