#pragma once

#include "rtst/mip.hpp"
#include "rtst/types.hpp"

namespace rtst {

struct EvalResult {
  double value = 0.0;        // C^T x + worst-case recourse cost
  ScenarioCertificate cert;  // scenario attaining the worst case
  Vector y;                  // recourse minimizer (relaxed)
};

// Mixed-binary compact model over variable blocks [x | y | extras]: the
// dualized form for halfspace families, an epigraph of vertex maxima for
// vertex-described sets, and a norm objective for ellipsoids. The first n
// variables are the binary first stage.
MipModel build_compact_model(const Instance& inst);

// Worst-case cost of a fixed first stage, with the adversary's certificate
// recovered from the dual solution. Spanning trees fall back to enumerating
// recourse completions.
EvalResult eval(const Instance& inst, const Vector& x);

// Optimal robust two-stage solution by branch and bound on the first stage.
TwoStageSolution solve_exact(const Instance& inst, int max_items = 30,
                             BnbReport* report = nullptr);

// Optimal value of the continuous relaxation (first stage in [0,1]).
double relaxation_value(const Instance& inst);

}  // namespace rtst
