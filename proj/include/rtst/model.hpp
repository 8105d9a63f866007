#pragma once

#include <cstdint>

#include "rtst/types.hpp"

namespace rtst {

// Throws ValidationError unless the instance satisfies every load-time
// invariant: nonnegative first-stage costs, consistent dimensions, a
// structurally nonempty feasible set, and a nonempty bounded uncertainty set.
void validate_instance(const Instance& inst);

// Constraint rows H z >= / = g describing the feasible set of a structure.
// SpanningTree has no such description here and is rejected.
LinearSystem build_linear_system(const Structure& structure, int n);

// Membership test z in X for a binary vector z.
bool structure_feasible(const Structure& structure, int n, const Vector& z,
                        double tol = 1e-7);

// Path graph with n arcs (unique s-t path), or the equivalent all-ones
// instance when as_graph is false.
Instance gen_chain_instance(int n, Vector first_stage_costs, UncertaintySet u,
                            bool as_graph = true);

// Shortest-path instance on m parallel s-i-t routes under a budgeted set with
// gamma = m: binary optimum m, relaxation optimum 1. M must exceed m^2;
// pass a nonpositive M to get the default 100 m^2.
Instance gen_sp_gap_instance(int m, double big_m = -1.0);

// Two-item selection instance whose exact value is 2 and relaxation 3/2.
Instance gen_selection_gap_instance();

// Two-item selection family showing the factor-2 rounding bound is tight as
// mu, gamma, eps -> 0. Requires gamma > eps > 0 and mu > 0.
Instance gen_selection_tightness_instance(double mu, double gamma, double eps);

// Rewrites an all-ones instance over a vertex-described polytope as one over
// a halfspace-described polytope in dimension n+K, preserving the optimum.
Instance reduce_vp_to_hp(const Instance& inst);

// Rewrites an all-ones instance with exactly two scenarios as an ellipsoidal
// instance whose optimum is exactly twice the original.
Instance reduce_two_scenario_to_ellipsoid(const Instance& inst);

// Seeded random instance cycling through the structure/family grid: the seed
// alone fixes every byte of the result. Sizes stay within max_items.
Instance gen_random_instance(std::uint64_t seed, int max_items = 8);

// Seeded random spanning-tree instance under a vertex-described set.
Instance gen_random_tree_instance(std::uint64_t seed, int max_items = 7);

}  // namespace rtst
