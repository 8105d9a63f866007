#include "rtst/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rtst/simplex.hpp"

namespace rtst {
namespace {

// LP over the deviation polytope {A delta <= b, delta >= 0}
LpProblem deviation_lp(const Matrix& a, const Vector& b, const Vector& obj) {
  LpProblem p = LpProblem::with_vars(static_cast<int>(obj.size()),
                                     LpSense::Maximize);
  p.objective = obj;
  p.lhs = a;
  p.rhs = b;
  p.relations.assign(a.rows(), LpRelation::LessEqual);
  return p;
}

Matrix multi_budget_rows(const MultiBudget& u, int n) {
  const int k = static_cast<int>(u.subsets.size());
  Matrix a = Matrix::Zero(k, n);
  for (int j = 0; j < k; ++j)
    for (int i : u.subsets[j]) a(j, i) = 1.0;
  return a;
}

}  // namespace

int scenario_dim(const UncertaintySet& u) {
  return std::visit(
      [](const auto& s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, VPolytope>)
          return s.vertices.empty() ? 0 : static_cast<int>(s.vertices[0].size());
        else
          return static_cast<int>(s.c_nominal.size());
      },
      u);
}

std::optional<HalfspaceView> halfspace_form(const UncertaintySet& u) {
  if (const auto* h = std::get_if<HPolytope>(&u))
    return HalfspaceView{h->c_nominal, h->A, h->b};
  if (const auto* bu = std::get_if<Budgeted>(&u)) {
    const int n = static_cast<int>(bu->c_nominal.size());
    Matrix a(n + 1, n);
    a.topRows(n) = Matrix::Identity(n, n);
    a.row(n) = Eigen::RowVectorXd::Ones(n);
    Vector b(n + 1);
    b.head(n) = bu->d;
    b[n] = bu->gamma;
    return HalfspaceView{bu->c_nominal, std::move(a), std::move(b)};
  }
  if (const auto* mb = std::get_if<MultiBudget>(&u)) {
    const int n = static_cast<int>(mb->c_nominal.size());
    return HalfspaceView{mb->c_nominal, multi_budget_rows(*mb, n),
                         mb->budgets};
  }
  return std::nullopt;
}

void validate_uncertainty(const UncertaintySet& u, int n) {
  if (scenario_dim(u) != n)
    throw ValidationError("uncertainty set dimension does not match item count");

  if (const auto* h = std::get_if<HPolytope>(&u)) {
    if (h->A.rows() != h->b.size() || h->A.cols() != n)
      throw ValidationError("h_polytope: constraint dimensions inconsistent");
    if ((h->c_nominal.array() < -kTol).any())
      throw ValidationError("h_polytope: nominal scenario must be nonnegative");
    // one LP certifies both nonemptiness and boundedness: delta >= 0 makes
    // any unbounded direction visible in the coordinate sum
    const LpResult r = lp_solve(deviation_lp(h->A, h->b, Vector::Ones(n)));
    if (r.status == LpStatus::Infeasible)
      throw ValidationError("h_polytope: deviation polytope is empty");
    if (r.status == LpStatus::Unbounded)
      throw ValidationError("h_polytope: deviation polytope is unbounded");
    return;
  }
  if (const auto* v = std::get_if<VPolytope>(&u)) {
    if (v->vertices.empty())
      throw ValidationError("v_polytope: needs at least one vertex");
    for (const Vector& c : v->vertices) {
      if (static_cast<int>(c.size()) != n)
        throw ValidationError("v_polytope: vertex dimension mismatch");
      if ((c.array() < -kTol).any())
        throw ValidationError("v_polytope: vertices must be nonnegative");
    }
    return;
  }
  if (const auto* e = std::get_if<Ellipsoid>(&u)) {
    if (e->A.rows() != n)
      throw ValidationError("ellipsoid: A must have one row per item");
    for (int i = 0; i < n; ++i)
      if (e->c_nominal[i] - e->A.row(i).norm() < -kTol)
        throw ValidationError("ellipsoid: scenarios reach negative coordinates");
    return;
  }
  if (const auto* b = std::get_if<Budgeted>(&u)) {
    if (b->d.size() != n)
      throw ValidationError("budgeted: cap vector dimension mismatch");
    if ((b->c_nominal.array() < -kTol).any() || (b->d.array() < -kTol).any() ||
        b->gamma < -kTol)
      throw ValidationError("budgeted: negative nominal, caps or budget");
    return;
  }
  const auto& mb = std::get<MultiBudget>(u);
  if (static_cast<int>(mb.subsets.size()) != mb.budgets.size())
    throw ValidationError("multi_budget: one budget per subset required");
  if ((mb.c_nominal.array() < -kTol).any() ||
      (mb.budgets.array() < -kTol).any())
    throw ValidationError("multi_budget: negative nominal or budget");
  std::vector<bool> covered(n, false);
  for (const auto& sub : mb.subsets) {
    if (sub.empty()) throw ValidationError("multi_budget: empty subset");
    for (int i : sub) {
      if (i < 0 || i >= n)
        throw ValidationError("multi_budget: subset index out of range");
      covered[i] = true;
    }
  }
  if (!std::all_of(covered.begin(), covered.end(), [](bool c) { return c; }))
    throw ValidationError(
        "multi_budget: every item needs a subset, otherwise the set is unbounded");
}

SupportResult support_max(const UncertaintySet& u, const Vector& y) {
  const int n = scenario_dim(u);
  if (static_cast<int>(y.size()) != n)
    throw ValidationError("support_max: vector dimension mismatch");

  if (const auto* v = std::get_if<VPolytope>(&u)) {
    int best = 0;
    double best_val = v->vertices[0].dot(y);
    for (int k = 1; k < static_cast<int>(v->vertices.size()); ++k) {
      const double val = v->vertices[k].dot(y);
      if (val > best_val + kTol) {
        best_val = val;
        best = k;
      }
    }
    return {best_val, {v->vertices[best], best_val}};
  }
  if (const auto* e = std::get_if<Ellipsoid>(&u)) {
    const Vector aty = e->A.transpose() * y;
    const double nrm = aty.norm();
    Vector delta = nrm > kTol ? Vector(aty / nrm) : Vector::Zero(aty.size());
    const Vector c = e->c_nominal + e->A * delta;
    const double val = e->c_nominal.dot(y) + nrm;
    return {val, {c, c.dot(y)}};
  }
  if (const auto* b = std::get_if<Budgeted>(&u)) {
    // pour the budget onto the largest y-coordinates, caps permitting
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return y[i] > y[j]; });
    Vector delta = Vector::Zero(n);
    double rem = b->gamma;
    for (int i : order) {
      if (rem <= kTol) break;
      const double take = std::min(b->d[i], rem);
      delta[i] = take;
      rem -= take;
    }
    const Vector c = b->c_nominal + delta;
    return {c.dot(y), {c, c.dot(y)}};
  }

  const HalfspaceView hs = *halfspace_form(u);
  LpResult r = lp_solve(deviation_lp(hs.A, hs.b, y));
  if (r.status != LpStatus::Optimal)
    throw NumericalError("support_max: deviation LP did not solve");
  const Vector c = hs.c_nominal + r.x;
  const double val = hs.c_nominal.dot(y) + r.objective;
  return {val, {c, val}};
}

Vector coordinate_max(const UncertaintySet& u) {
  const int n = scenario_dim(u);
  if (const auto* v = std::get_if<VPolytope>(&u)) {
    Vector m = v->vertices[0];
    for (const Vector& c : v->vertices) m = m.cwiseMax(c);
    return m;
  }
  if (const auto* e = std::get_if<Ellipsoid>(&u)) {
    Vector m(n);
    for (int i = 0; i < n; ++i) m[i] = e->c_nominal[i] + e->A.row(i).norm();
    return m;
  }
  if (const auto* b = std::get_if<Budgeted>(&u)) {
    return b->c_nominal +
           b->d.cwiseMin(Vector::Constant(n, b->gamma));
  }
  const HalfspaceView hs = *halfspace_form(u);
  Vector m(n);
  for (int i = 0; i < n; ++i) {
    Vector e = Vector::Zero(n);
    e[i] = 1.0;
    LpResult r = lp_solve(deviation_lp(hs.A, hs.b, e));
    if (r.status != LpStatus::Optimal)
      throw NumericalError("coordinate_max: deviation LP did not solve");
    m[i] = hs.c_nominal[i] + r.objective;
  }
  return m;
}

bool contains(const UncertaintySet& u, const Vector& c, double tol) {
  const int n = scenario_dim(u);
  if (static_cast<int>(c.size()) != n)
    throw ValidationError("contains: vector dimension mismatch");

  if (const auto* v = std::get_if<VPolytope>(&u)) {
    // feasibility of a convex combination, solved as a phase-1 style LP
    const int k = static_cast<int>(v->vertices.size());
    LpProblem p = LpProblem::with_vars(k + 2 * n);  // lambda, art+, art-
    for (int j = 0; j < 2 * n; ++j) p.objective[k + j] = 1.0;
    for (int i = 0; i < n; ++i) {
      Vector row = Vector::Zero(k + 2 * n);
      for (int j = 0; j < k; ++j) row[j] = v->vertices[j][i];
      row[k + i] = 1.0;
      row[k + n + i] = -1.0;
      p.add_row(row, LpRelation::Equal, c[i]);
    }
    Vector ones = Vector::Zero(k + 2 * n);
    ones.head(k).setOnes();
    p.add_row(ones, LpRelation::Equal, 1.0);
    LpResult r = lp_solve(p);
    return r.status == LpStatus::Optimal && r.objective <= tol * (1.0 + c.norm());
  }
  if (const auto* e = std::get_if<Ellipsoid>(&u)) {
    const Vector rhsv = c - e->c_nominal;
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(e->A);
    const Vector delta = cod.solve(rhsv);  // minimum-norm solution
    if ((e->A * delta - rhsv).norm() > tol * (1.0 + rhsv.norm())) return false;
    return delta.norm() <= 1.0 + tol;
  }

  const HalfspaceView hs = *halfspace_form(u);
  const Vector delta = c - hs.c_nominal;
  if ((delta.array() < -tol).any()) return false;
  const Vector lhs = hs.A * delta;
  for (int i = 0; i < lhs.size(); ++i)
    if (lhs[i] > hs.b[i] + tol * (1.0 + std::abs(hs.b[i]))) return false;
  return true;
}

Vector vertex_centroid(const VPolytope& u) {
  if (u.vertices.empty())
    throw ValidationError("vertex_centroid: empty vertex list");
  Vector c = Vector::Zero(u.vertices[0].size());
  for (const Vector& v : u.vertices) c += v;
  return c / static_cast<double>(u.vertices.size());
}

}  // namespace rtst
