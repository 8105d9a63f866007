#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rtst/types.hpp"

namespace rtst {

// Inner problem of the grid scheme: min C'x + c_nominal'y over the structure
// with x binary, 0 <= y <= caps, and x + y filling the structure exactly.
struct CappedSubproblem {
  Structure structure;
  Vector first_stage_costs;
  Vector c_nominal;
  Vector caps;  // per-item recourse capacity, entries in [0, 1]
};

struct CappedSolution {
  Vector x;
  Vector y;
  double value = 0;
};

struct UnitFlow {
  double cost = 0;
  Vector flow;  // per arc, in [0, caps]
};

// Selection: DP over items and accumulated eps-units of mass. Caps must be
// multiples of eps. Throws InfeasibleError when mass p is unreachable.
CappedSolution capped_selection_dp(const CappedSubproblem& sub, double eps);

// Representatives: per-group greedy pour onto the cheapest nominal costs;
// falls back to the cheapest first-stage item when the caps cannot carry a
// full unit or the first stage is no more expensive.
CappedSolution capped_rs_greedy(const CappedSubproblem& sub);

// Shortest path: shortest s-t route on the auxiliary multigraph made of the
// original arcs (first-stage cost) plus one arc per node pair carrying a
// min-cost unit flow under the caps. Exact on acyclic graphs.
CappedSolution capped_sp_multigraph(const CappedSubproblem& sub);

// Min-cost flow of value exactly 1 with fractional capacities, by successive
// shortest paths on reduced costs. nullopt when the max flow falls short of 1.
std::optional<UnitFlow> min_cost_unit_flow(
    int node_count, const std::vector<std::pair<int, int>>& arcs,
    const Vector& caps, const Vector& costs, int source, int sink);

}  // namespace rtst
