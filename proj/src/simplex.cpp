#include "rtst/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rtst {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr long kBlandAfter = 10000;
constexpr long kIterationCap = 1000000;

// Column built from an original variable after shifting/negation/splitting.
// x_orig = sum over its columns of sign * x_std + offset (offset appears on
// at most one column per variable).
struct VarMap {
  int var = 0;
  double sign = 1;
  double offset = 0;
};

struct StandardForm {
  Matrix a;                     // equality-ready rows (slacks appended later)
  Vector b;                     // >= 0 after row flips
  Vector cost;                  // phase-2 costs of structural columns
  double cost_offset = 0;       // constant folded out of the objective
  std::vector<VarMap> columns;
  std::vector<LpRelation> rels;    // normalized orientation per row
  std::vector<double> row_flip;    // +1 kept, -1 flipped
  std::vector<int> row_source;     // original row index, -1 for box rows
};

StandardForm standardize(const LpProblem& p, const Vector& c_min) {
  const int n = p.var_count();
  const int m = p.row_count();

  StandardForm sf;
  for (int j = 0; j < n; ++j) {
    const double lo = p.lower[j], hi = p.upper[j];
    if (std::isfinite(lo)) {
      sf.columns.push_back({j, 1.0, lo});
    } else if (std::isfinite(hi)) {
      sf.columns.push_back({j, -1.0, hi});
    } else {
      sf.columns.push_back({j, 1.0, 0.0});
      sf.columns.push_back({j, -1.0, 0.0});
    }
  }
  const int ncols = static_cast<int>(sf.columns.size());

  std::vector<Vector> rows;
  std::vector<double> rhs;

  for (int i = 0; i < m; ++i) {
    Vector row = Vector::Zero(ncols);
    double r = p.rhs[i];
    for (int k = 0; k < ncols; ++k) {
      const VarMap& vm = sf.columns[k];
      row[k] = p.lhs(i, vm.var) * vm.sign;
      r -= p.lhs(i, vm.var) * vm.offset;  // offset nonzero on one column max
    }
    rows.push_back(std::move(row));
    rhs.push_back(r);
    sf.rels.push_back(p.relations[i]);
    sf.row_source.push_back(i);
  }

  sf.cost = Vector::Zero(ncols);
  for (int k = 0; k < ncols; ++k) {
    const VarMap& vm = sf.columns[k];
    sf.cost[k] = c_min[vm.var] * vm.sign;
    sf.cost_offset += c_min[vm.var] * vm.offset;
  }

  // Box rows for variables with both bounds finite: x_std <= hi - lo (the
  // lower bound is already shifted away).
  for (int k = 0; k < ncols; ++k) {
    const VarMap& vm = sf.columns[k];
    const double lo = p.lower[vm.var], hi = p.upper[vm.var];
    if (std::isfinite(lo) && std::isfinite(hi)) {
      Vector row = Vector::Zero(ncols);
      row[k] = 1.0;
      rows.push_back(std::move(row));
      rhs.push_back(hi - lo);
      sf.rels.push_back(LpRelation::LessEqual);
      sf.row_source.push_back(-1);
    }
  }

  const int mr = static_cast<int>(rows.size());
  sf.a.resize(mr, ncols);
  sf.b.resize(mr);
  sf.row_flip.assign(mr, 1.0);
  for (int i = 0; i < mr; ++i) {
    Vector row = rows[i];
    double r = rhs[i];
    if (r < 0) {
      row = -row;
      r = -r;
      sf.row_flip[i] = -1.0;
      sf.rels[i] = sf.rels[i] == LpRelation::LessEqual ? LpRelation::GreaterEqual
                   : sf.rels[i] == LpRelation::GreaterEqual
                       ? LpRelation::LessEqual
                       : LpRelation::Equal;
    }
    sf.a.row(i) = row;
    sf.b[i] = r;
  }
  return sf;
}

}  // namespace

LpProblem LpProblem::with_vars(int n, LpSense sense) {
  LpProblem p;
  p.sense = sense;
  p.objective = Vector::Zero(n);
  p.lhs = Matrix::Zero(0, n);
  p.rhs = Vector::Zero(0);
  p.lower = Vector::Zero(n);
  p.upper = Vector::Constant(n, kInf);
  return p;
}

void LpProblem::add_row(const Vector& coeffs, LpRelation rel, double value) {
  const int m = row_count();
  Matrix next(m + 1, var_count());
  if (m > 0) next.topRows(m) = lhs;
  next.row(m) = coeffs.transpose();
  lhs = std::move(next);
  Vector nr(m + 1);
  if (m > 0) nr.head(m) = rhs;
  nr[m] = value;
  rhs = std::move(nr);
  relations.push_back(rel);
}

LpResult lp_solve(const LpProblem& problem) {
  const int n = problem.var_count();
  if (problem.lhs.rows() != problem.row_count() ||
      static_cast<int>(problem.relations.size()) != problem.row_count() ||
      problem.lhs.cols() != n || problem.lower.size() != n ||
      problem.upper.size() != n)
    throw ValidationError("lp_solve: inconsistent problem dimensions");

  LpResult res;
  for (int j = 0; j < n; ++j)
    if (problem.lower[j] > problem.upper[j] + kTol) {
      res.status = LpStatus::Infeasible;
      return res;
    }

  const bool maximize = problem.sense == LpSense::Maximize;
  const Vector c_min =
      maximize ? Vector(-problem.objective) : problem.objective;

  StandardForm sf = standardize(problem, c_min);
  const int mr = static_cast<int>(sf.b.size());
  const int ns = static_cast<int>(sf.columns.size());

  // Column layout: structural | slack/surplus | artificial.
  std::vector<int> slack_col(mr, -1), art_col(mr, -1);
  int total = ns;
  for (int i = 0; i < mr; ++i)
    if (sf.rels[i] != LpRelation::Equal) slack_col[i] = total++;
  const int first_art = total;
  for (int i = 0; i < mr; ++i)
    if (sf.rels[i] != LpRelation::LessEqual) art_col[i] = total++;

  Matrix t = Matrix::Zero(mr, total + 1);
  if (mr > 0) t.block(0, 0, mr, ns) = sf.a;
  for (int i = 0; i < mr; ++i) {
    if (slack_col[i] >= 0)
      t(i, slack_col[i]) = sf.rels[i] == LpRelation::LessEqual ? 1.0 : -1.0;
    if (art_col[i] >= 0) t(i, art_col[i]) = 1.0;
    t(i, total) = sf.b[i];
  }

  std::vector<int> basis(mr);
  for (int i = 0; i < mr; ++i)
    basis[i] = art_col[i] >= 0 ? art_col[i] : slack_col[i];

  auto is_artificial = [&](int col) { return col >= first_art; };
  long iterations = 0;

  // Runs one phase to optimality over the reduced-cost row `z` (last entry
  // carries -objective). Returns false on an unbounded direction.
  auto run_phase = [&](Eigen::RowVectorXd& z, bool block_artificials) {
    while (true) {
      if (++iterations > kIterationCap)
        throw NumericalError("simplex iteration cap exhausted");
      const bool bland = iterations > kBlandAfter;
      int enter = -1;
      double best = -kPivotTol;
      for (int j = 0; j < total; ++j) {
        if (block_artificials && is_artificial(j)) continue;
        const double rj = z[j];
        if (rj < -kPivotTol) {
          if (bland) {
            enter = j;
            break;
          }
          if (rj < best) {
            best = rj;
            enter = j;
          }
        }
      }
      if (enter < 0) return true;

      int leave = -1;
      double best_ratio = kInf;
      for (int i = 0; i < mr; ++i) {
        const double aij = t(i, enter);
        if (aij > kPivotTol) {
          const double ratio = t(i, total) / aij;
          if (ratio < best_ratio - kPivotTol ||
              (ratio < best_ratio + kPivotTol &&
               (leave < 0 || basis[i] < basis[leave]))) {
            best_ratio = std::min(best_ratio, ratio);
            leave = i;
          }
        }
      }
      if (leave < 0) return false;

      const double piv = t(leave, enter);
      t.row(leave) /= piv;
      for (int i = 0; i < mr; ++i) {
        if (i == leave) continue;
        const double f = t(i, enter);
        if (f != 0.0) t.row(i) -= f * t.row(leave);
      }
      const double fz = z[enter];
      if (fz != 0.0) z -= fz * t.row(leave);
      z[enter] = 0.0;
      basis[leave] = enter;
    }
  };

  if (first_art < total) {
    Eigen::RowVectorXd z = Eigen::RowVectorXd::Zero(total + 1);
    for (int j = first_art; j < total; ++j) z[j] = 1.0;
    for (int i = 0; i < mr; ++i)
      if (is_artificial(basis[i])) z -= t.row(i);
    if (!run_phase(z, false))
      throw NumericalError("phase-1 simplex reported an unbounded direction");
    if (-z[total] > 1e-7 * (1.0 + sf.b.sum())) {
      res.status = LpStatus::Infeasible;
      res.iterations = iterations;
      return res;
    }
    // pivot leftover artificials out where a structural pivot exists
    for (int i = 0; i < mr; ++i) {
      if (!is_artificial(basis[i])) continue;
      int piv = -1;
      for (int j = 0; j < first_art; ++j)
        if (std::abs(t(i, j)) > 1e-7) {
          piv = j;
          break;
        }
      if (piv < 0) continue;  // redundant row
      const double pv = t(i, piv);
      t.row(i) /= pv;
      for (int k = 0; k < mr; ++k) {
        if (k == i) continue;
        const double f = t(k, piv);
        if (f != 0.0) t.row(k) -= f * t.row(i);
      }
      basis[i] = piv;
    }
  }

  Eigen::RowVectorXd z = Eigen::RowVectorXd::Zero(total + 1);
  for (int j = 0; j < ns; ++j) z[j] = sf.cost[j];
  for (int i = 0; i < mr; ++i) {
    const int bj = basis[i];
    const double cb = bj < ns ? sf.cost[bj] : 0.0;
    if (cb != 0.0) z -= cb * t.row(i);
  }
  for (int i = 0; i < mr; ++i) z[basis[i]] = 0.0;

  if (!run_phase(z, true)) {
    res.status = LpStatus::Unbounded;
    res.iterations = iterations;
    return res;
  }

  Vector xs = Vector::Zero(total);
  for (int i = 0; i < mr; ++i) xs[basis[i]] = t(i, total);
  Vector x = Vector::Zero(n);
  for (int k = 0; k < ns; ++k) {
    const VarMap& vm = sf.columns[k];
    x[vm.var] += vm.sign * xs[k] + vm.offset;
  }

  const double obj_min = -z[total] + sf.cost_offset;

  Vector y_std = Vector::Zero(mr);
  for (int i = 0; i < mr; ++i) {
    // reduced cost of a row's unit column exposes its multiplier
    if (art_col[i] >= 0)
      y_std[i] = -z[art_col[i]];
    else
      y_std[i] = -z[slack_col[i]];
  }
  double dual_obj = sf.cost_offset;
  for (int i = 0; i < mr; ++i) dual_obj += y_std[i] * sf.b[i];

  Vector duals = Vector::Zero(problem.row_count());
  for (int i = 0; i < mr; ++i)
    if (sf.row_source[i] >= 0)
      duals[sf.row_source[i]] = y_std[i] * sf.row_flip[i];

  res.status = LpStatus::Optimal;
  res.x = std::move(x);
  res.objective = maximize ? -obj_min : obj_min;
  res.duals = maximize ? Vector(-duals) : duals;
  res.dual_objective = maximize ? -dual_obj : dual_obj;
  res.iterations = iterations;
  return res;
}

}  // namespace rtst
