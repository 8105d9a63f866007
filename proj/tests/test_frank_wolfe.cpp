#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "rtst/frank_wolfe.hpp"
#include "rtst/simplex.hpp"

using namespace rtst;

namespace {

// min c^T v over the unit simplex of dimension n
LpProblem simplex_polytope(const Vector& c) {
  LpProblem p = LpProblem::with_vars(static_cast<int>(c.size()));
  p.objective = c;
  p.add_row(Vector::Ones(c.size()), LpRelation::Equal, 1.0);
  return p;
}

// dense scan of c^T (t, 1-t) + ||Q^T (t, 1-t)|| over t in [0,1]
double scan_two_var(const Vector& c, const Matrix& q) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 200000; ++k) {
    const double t = k / 200000.0;
    Vector v(2);
    v << t, 1.0 - t;
    best = std::min(best, c.dot(v) + (q.transpose() * v).norm());
  }
  return best;
}

}  // namespace

TEST_CASE("zero norm term reduces to the lp") {
  Vector c(3);
  c << 2, 1, 3;
  LpProblem p = simplex_polytope(c);
  const Matrix q = Matrix::Zero(3, 2);
  FwResult r = fw_solve(p, q);
  REQUIRE(r.status == LpStatus::Optimal);
  LpResult lp = lp_solve(p);
  CHECK(r.value == doctest::Approx(lp.objective).epsilon(1e-5));
  CHECK(r.lower_bound <= lp.objective + 1e-6);
}

TEST_CASE("two-variable problems agree with a dense scan") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> d(-1.0, 2.0);
  for (int tc = 0; tc < 12; ++tc) {
    Vector c(2);
    c << d(rng), d(rng);
    Matrix q(2, 2);
    q << d(rng), d(rng), d(rng), d(rng);
    LpProblem p = simplex_polytope(c);
    const double want = scan_two_var(c, q);
    FwResult r = fw_solve(p, q);
    CAPTURE(tc);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.value >= want - 1e-9);               // reported point is feasible
    CHECK(r.value <= want + 1e-4 * (1 + std::abs(want)));
    CHECK(r.lower_bound <= want + 1e-9);         // bound stays valid
    CHECK(r.gap == doctest::Approx(r.value - r.lower_bound).epsilon(1e-9));
  }
}

TEST_CASE("box polytopes with several norm columns") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> d(0.0, 1.5);
  for (int tc = 0; tc < 8; ++tc) {
    const int n = 3;
    LpProblem p = LpProblem::with_vars(n);
    p.upper = Vector::Constant(n, 1.0);
    Vector c(n);
    for (int i = 0; i < n; ++i) c[i] = d(rng) - 0.5;
    p.objective = c;
    Matrix q(n, 2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < 2; ++j) q(i, j) = d(rng) - 0.75;
    FwResult r = fw_solve(p, q);
    REQUIRE(r.status == LpStatus::Optimal);
    // brute force over the 8 corners plus the reported point must bracket it
    double corner_best = std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < 8; ++mask) {
      Vector v(n);
      for (int i = 0; i < n; ++i) v[i] = (mask >> i) & 1u;
      corner_best = std::min(corner_best, c.dot(v) + (q.transpose() * v).norm());
    }
    CHECK(r.value <= corner_best + 1e-6);  // convex minimum beats all corners
    CHECK(r.lower_bound <= r.value + 1e-12);
    CHECK(r.gap <= 1e-4 * (1.0 + std::abs(r.value)));
  }
}

TEST_CASE("infeasible polytope is reported") {
  LpProblem p = LpProblem::with_vars(1);
  p.objective << 1;
  Vector row(1);
  row << 1;
  p.add_row(row, LpRelation::LessEqual, -2.0);
  FwResult r = fw_solve(p, Matrix::Zero(1, 1));
  CHECK(r.status == LpStatus::Infeasible);
}
