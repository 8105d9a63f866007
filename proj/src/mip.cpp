#include "rtst/mip.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <utility>

#include "rtst/frank_wolfe.hpp"

namespace rtst {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Node {
  Vector lower;
  Vector upper;
  Vector point;
  double bound = 0.0;
  long seq = 0;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.seq > b.seq;
  }
};

struct NodeSolve {
  bool feasible = false;
  Vector point;
  double value = 0.0;
  double bound = 0.0;
};

NodeSolve solve_node(const MipModel& model, const Vector& lower,
                     const Vector& upper, int fw_iters) {
  LpProblem lp = model.relaxation;
  lp.lower = lower;
  lp.upper = upper;
  NodeSolve out;
  if (model.has_norm) {
    FwOptions opts;
    opts.max_iters = fw_iters;
    const FwResult r = fw_solve(lp, model.norm_q, opts);
    if (r.status != LpStatus::Optimal) return out;
    out.feasible = true;
    out.point = r.x;
    out.value = r.value;
    out.bound = r.lower_bound;
    return out;
  }
  const LpResult r = lp_solve(lp);
  if (r.status == LpStatus::Unbounded)
    throw NumericalError("bnb: node relaxation unbounded");
  if (r.status != LpStatus::Optimal) return out;
  out.feasible = true;
  out.point = r.x;
  out.value = r.objective;
  out.bound = r.objective;
  return out;
}

// index of the binary variable farthest from an integer, -1 if all integral
int most_fractional(const MipModel& model, const Vector& point, double tol) {
  int pick = -1;
  double worst = tol;
  for (int j : model.binary_vars) {
    const double frac = std::abs(point[j] - std::round(point[j]));
    if (frac > worst) {
      worst = frac;
      pick = j;
    }
  }
  return pick;
}

}  // namespace

BnbReport bnb_solve(const MipModel& model, const BnbOptions& opts) {
  if (model.relaxation.sense != LpSense::Minimize)
    throw ValidationError("bnb: expects a minimization model");
  for (int j : model.binary_vars)
    if (j < 0 || j >= model.relaxation.var_count())
      throw ValidationError("bnb: binary variable index out of range");

  BnbReport report;
  report.value = kInf;
  long seq = 0;

  Node root;
  root.lower = model.relaxation.lower;
  root.upper = model.relaxation.upper;
  for (int j : model.binary_vars) {
    root.lower[j] = std::max(root.lower[j], 0.0);
    root.upper[j] = std::min(root.upper[j], 1.0);
  }
  const NodeSolve rs = solve_node(model, root.lower, root.upper, opts.fw_node_iters);
  ++report.node_count;
  if (!rs.feasible) {
    report.status = LpStatus::Infeasible;
    return report;
  }
  report.root_relaxation = rs.bound;
  root.point = rs.point;
  root.bound = rs.bound;
  root.seq = seq++;

  std::priority_queue<Node, std::vector<Node>, NodeOrder> heap;
  const auto offer = [&](Node&& node, const NodeSolve& ns) {
    // an integral point is a feasible incumbent, but with an inexact
    // (Frank-Wolfe) node solve its subtree may still hide a better one,
    // so the node is kept whenever the bound leaves room
    if (most_fractional(model, ns.point, opts.integer_tol) < 0 &&
        ns.value < report.value) {
      report.value = ns.value;
      report.x = ns.point;
    }
    if (ns.bound >= report.value - kTol) return;
    node.point = ns.point;
    node.bound = ns.bound;
    node.seq = seq++;
    heap.push(std::move(node));
  };
  offer(std::move(root), rs);
  while (!heap.empty()) {
    Node node = heap.top();
    heap.pop();
    if (node.bound >= report.value - kTol) continue;
    int branch = most_fractional(model, node.point, opts.integer_tol);
    if (branch < 0)
      for (int j : model.binary_vars)
        if (node.lower[j] < node.upper[j]) {
          branch = j;
          break;
        }
    if (branch < 0) continue;  // every binary fixed: nothing below
    if (report.node_count >= opts.max_nodes)
      throw NumericalError("bnb: node limit exceeded");
    for (int side = 0; side < 2; ++side) {
      Node child;
      child.lower = node.lower;
      child.upper = node.upper;
      (side == 0 ? child.upper : child.lower)[branch] = side;
      const NodeSolve cs =
          solve_node(model, child.lower, child.upper, opts.fw_node_iters);
      ++report.node_count;
      if (cs.feasible) offer(std::move(child), cs);
    }
  }
  if (!std::isfinite(report.value)) {
    report.status = LpStatus::Infeasible;
    return report;
  }
  report.status = LpStatus::Optimal;
  return report;
}

}  // namespace rtst
