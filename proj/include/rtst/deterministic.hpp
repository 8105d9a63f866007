#pragma once

#include "rtst/types.hpp"

namespace rtst {

struct IncrementalResult {
  Vector y;
  double value = 0.0;
};

// Optimal base solution min { costs^T z : z in X }. Costs must be >= 0.
DetSolution solve_p(const Structure& structure, const Vector& costs);

// Two-stage optimum for a fixed scenario: solve the base problem under
// min(C_i, c_i) and split the winner into stages, ties going first stage.
TwoStageSolution two_stage(const Instance& inst, const Vector& scenario);

// Cheapest recourse completion min { c^T y : x + y in X }. Throws
// InfeasibleError when x admits no completion.
IncrementalResult incremental(const Structure& structure, const Vector& x,
                              const Vector& scenario);

}  // namespace rtst
