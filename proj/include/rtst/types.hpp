#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace rtst {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Global comparison tolerance for doubles. Feasibility and certificate
// checks scale it by (1 + |value|) where a relative test is meaningful.
inline constexpr double kTol = 1e-9;

inline double scaled_tol(double reference, double tol = kTol) {
  return tol * (1.0 + std::abs(reference));
}

// Instance or argument violates a documented invariant.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structurally infeasible: no s-t path, x not completable, mass unreachable.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Iteration caps exhausted or a solver lost numerical footing.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Ground structures. Items are 0-based; for graph structures the items are
// the arcs/edges in the order given.

struct Selection {
  int p = 0;  // number of items to hold in total
};

struct RepSelection {
  std::vector<std::vector<int>> groups;  // disjoint, cover all items
};

struct ShortestPath {
  int node_count = 0;
  std::vector<std::pair<int, int>> arcs;  // directed, parallel arcs allowed
  int source = 0;
  int sink = 0;
};

struct SpanningTree {
  int node_count = 0;
  std::vector<std::pair<int, int>> edges;  // undirected
};

struct AllOnes {};  // the only feasible solution is the all-ones vector

using Structure =
    std::variant<Selection, RepSelection, ShortestPath, SpanningTree, AllOnes>;

// ---------------------------------------------------------------------------
// Uncertainty families. All scenarios live in the nonnegative orthant; the
// loader validates nonemptiness, boundedness and nonnegativity.

struct HPolytope {
  Vector c_nominal;  // size n
  Matrix A;          // m x n, deviation constraints A*delta <= b, delta >= 0
  Vector b;          // size m, must be >= 0 so delta = 0 is feasible
};

struct VPolytope {
  std::vector<Vector> vertices;  // K >= 1 scenario vertices, size n each
};

struct Ellipsoid {
  Vector c_nominal;  // size n
  Matrix A;          // n x q, scenarios c_nominal + A*delta, ||delta||_2 <= 1
};

struct Budgeted {
  Vector c_nominal;  // size n
  Vector d;          // per-item deviation caps, >= 0
  double gamma = 0;  // total deviation budget
};

struct MultiBudget {
  Vector c_nominal;                      // size n
  std::vector<std::vector<int>> subsets;  // K item subsets, union covers [n]
  Vector budgets;                        // size K, per-subset budgets
};

using UncertaintySet =
    std::variant<HPolytope, VPolytope, Ellipsoid, Budgeted, MultiBudget>;

// ---------------------------------------------------------------------------

struct Instance {
  Vector first_stage_costs;  // size n, >= 0
  Structure structure;
  UncertaintySet uncertainty;

  int item_count() const { return static_cast<int>(first_stage_costs.size()); }
};

enum class Relation { GreaterEqual, Equal };

// Rows describing the feasible set {z binary : lhs*z (>=|=) rhs}. `integral`
// marks structures whose relaxation {0 <= z <= 1} has integral vertices.
struct LinearSystem {
  Matrix lhs;
  Vector rhs;
  std::vector<Relation> relations;
  bool integral = false;
};

struct DetSolution {
  Vector z;  // binary
  double value = 0;
};

// Scenario attaining a support maximum, kept as a certificate.
struct ScenarioCertificate {
  Vector c;
  double attained = 0;
};

struct TwoStageSolution {
  Vector x;  // binary first stage
  Vector y;  // recourse, binary for combinatorial solvers
  double value = 0;
  std::optional<Vector> worst_scenario;
};

struct Bounds {
  double lower = 0;
  double upper = 0;
  double ratio = 1;  // upper / lower, 1 when both vanish
};

// Result of an approximation algorithm. `value` is the certified objective
// (recomputed, never the algorithm's internal bookkeeping); `guarantee` is
// the proven factor against the exact optimum where one exists.
struct ApproxResult {
  Vector x;
  double value = 0;
  std::optional<double> guarantee;
  std::optional<double> lower_bound;
  std::optional<double> minmax_objective;  // min-max value when x,y both binary
  Vector y;                                // recourse used by the certificate
};

inline bool is_binary(double v, double tol = 1e-7) {
  return std::abs(v) <= tol || std::abs(v - 1.0) <= tol;
}

inline bool is_binary(const Vector& v, double tol = 1e-7) {
  for (int i = 0; i < v.size(); ++i)
    if (!is_binary(v[i], tol)) return false;
  return true;
}

}  // namespace rtst
