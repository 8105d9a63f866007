#pragma once

#include <string>
#include <vector>

#include "rtst/types.hpp"

namespace rtst {

struct OracleEntry {
  Vector x;
  double value = 0;
};

struct OracleReport {
  double value = 0;
  Vector x;
  std::vector<OracleEntry> table;  // every partial solution, when requested
  std::string notes;
};

// Exhaustive ground truth: enumerates every partial solution (each subset of
// a feasible completion) and takes the cheapest worst case over it. Vertex
// sets are scored combinatorially; convex families go through the exact
// evaluation. Spanning trees require a vertex-described set.
OracleReport oracle_solve(const Instance& inst, int max_items = 12,
                          bool keep_table = false);

}  // namespace rtst
