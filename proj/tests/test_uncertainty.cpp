#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "rtst/model.hpp"
#include "rtst/types.hpp"
#include "rtst/uncertainty.hpp"
#include "support/lp_brute.hpp"

using namespace rtst;

namespace {

Vector vec(std::initializer_list<double> vals) {
  Vector v(static_cast<Eigen::Index>(vals.size()));
  int i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}

Vector random_nonneg(std::mt19937& rng, int n, double hi = 3.0) {
  std::uniform_real_distribution<double> d(0.0, hi);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

// Independent support oracle for a halfspace view with known coordinate
// bounds: enumerate the vertices of {A delta <= b, 0 <= delta <= box}.
double brute_support(const HalfspaceView& hs, const Vector& y, double box) {
  const int n = static_cast<int>(hs.c_nominal.size());
  LpProblem p = LpProblem::with_vars(n, LpSense::Maximize);
  p.objective = y;
  p.upper = Vector::Constant(n, box);
  for (int i = 0; i < hs.A.rows(); ++i)
    p.add_row(hs.A.row(i), LpRelation::LessEqual, hs.b[i]);
  testing::BruteLpResult r = testing::brute_lp(p);
  REQUIRE(r.feasible);
  return hs.c_nominal.dot(y) + r.objective;
}

void check_cert(const UncertaintySet& u, const Vector& y) {
  const SupportResult sup = support_max(u, y);
  CHECK(contains(u, sup.cert.c));
  CHECK(std::abs(sup.cert.c.dot(y) - sup.value) <= scaled_tol(sup.value, 1e-6));
  CHECK(std::abs(sup.cert.attained - sup.value) <= scaled_tol(sup.value, 1e-6));
}

}  // namespace

TEST_CASE("vertex support is the best vertex") {
  VPolytope u{{vec({2, 0}), vec({0, 2}), vec({1, 0.5})}};
  const Vector y = vec({1, 3});
  const SupportResult sup = support_max(u, y);
  CHECK(sup.value == doctest::Approx(6.0));  // vertex (0,2)
  CHECK(sup.cert.c.isApprox(vec({0, 2})));
  CHECK(vertex_centroid(u).isApprox(vec({1, 2.5 / 3})));
}

TEST_CASE("budgeted support pours greedily") {
  // c = (1,1,1) + delta, delta <= (0.5, 2, 1), sum delta <= 2
  Budgeted u{vec({1, 1, 1}), vec({0.5, 2, 1}), 2.0};
  // best pour for y = (1,2,3): item 2 gets 1, item 1 gets the rest
  const Vector y = vec({1, 2, 3});
  const SupportResult sup = support_max(u, y);
  CHECK(sup.value == doctest::Approx(y.sum() + 1.0 * 3 + 1.0 * 2));
  check_cert(u, y);
}

TEST_CASE("halfspace view of budgeted and multi-budget sets matches") {
  std::mt19937 rng(77);
  Budgeted bu{vec({1, 2, 0.5}), vec({1, 0.5, 2}), 1.5};
  const auto hs = halfspace_form(UncertaintySet{bu});
  REQUIRE(hs);
  for (int t = 0; t < 20; ++t) {
    const Vector y = random_nonneg(rng, 3);
    const double direct = support_max(UncertaintySet{bu}, y).value;
    const double via_hp =
        support_max(UncertaintySet{HPolytope{hs->c_nominal, hs->A, hs->b}}, y)
            .value;
    CHECK(direct == doctest::Approx(via_hp).epsilon(1e-8));
  }

  MultiBudget mb{vec({1, 1, 1}), {{0, 1}, {1, 2}}, vec({1.0, 0.5})};
  const auto hs2 = halfspace_form(UncertaintySet{mb});
  REQUIRE(hs2);
  for (int t = 0; t < 20; ++t) {
    const Vector y = random_nonneg(rng, 3);
    const double direct = support_max(UncertaintySet{mb}, y).value;
    const double brute = brute_support(*hs2, y, 2.0);
    CHECK(direct == doctest::Approx(brute).epsilon(1e-7));
  }
}

TEST_CASE("polytope support agrees with vertex enumeration") {
  std::mt19937 rng(2024);
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 200 && checked < 25; ++seed) {
    const Instance inst = gen_random_instance(seed);
    const auto hs = halfspace_form(inst.uncertainty);
    if (!hs) continue;
    ++checked;
    const Vector y = random_nonneg(rng, inst.item_count());
    // generator budgets keep every coordinate deviation at 6 or less
    const double brute = brute_support(*hs, y, 6.0);
    const SupportResult sup = support_max(inst.uncertainty, y);
    CHECK(sup.value == doctest::Approx(brute).epsilon(1e-7));
    check_cert(inst.uncertainty, y);
  }
  CHECK(checked == 25);
}

TEST_CASE("ellipsoid support formula and norm sandwich") {
  Matrix a(3, 2);
  a << 0.3, 0.1, 0.2, -0.1, 0.0, 0.4;
  Ellipsoid u{vec({2, 3, 1}), a};
  std::mt19937 rng(5);
  for (int t = 0; t < 20; ++t) {
    const Vector y = random_nonneg(rng, 3);
    const double two = (a.transpose() * y).norm();
    const double one = (a.transpose() * y).lpNorm<1>();
    const double val = support_max(UncertaintySet{u}, y).value;
    CHECK(val == doctest::Approx(u.c_nominal.dot(y) + two).epsilon(1e-9));
    CHECK(u.c_nominal.dot(y) + two <= u.c_nominal.dot(y) + one + 1e-12);
    CHECK(one <= std::sqrt(2.0) * two + 1e-12);
    check_cert(UncertaintySet{u}, y);
  }
}

TEST_CASE("support is monotone and positively homogeneous") {
  std::mt19937 rng(99);
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const Instance inst = gen_random_instance(seed);
    const int n = inst.item_count();
    const Vector y = random_nonneg(rng, n);
    Vector bigger = y;
    bigger[static_cast<int>(seed) % n] += 1.0;
    const double base = support_max(inst.uncertainty, y).value;
    CHECK(support_max(inst.uncertainty, bigger).value >= base - 1e-9);
    CHECK(support_max(inst.uncertainty, 2.0 * y).value ==
          doctest::Approx(2.0 * base).epsilon(1e-8));
    CHECK(std::abs(support_max(inst.uncertainty, Vector::Zero(n)).value) <=
          1e-9);
  }
}

TEST_CASE("coordinate maxima match per-family closed forms") {
  VPolytope vp{{vec({2, 0}), vec({0, 2}), vec({1, 0.5})}};
  CHECK(coordinate_max(UncertaintySet{vp}).isApprox(vec({2, 2})));

  Budgeted bu{vec({1, 1}), vec({3, 0.5}), 2.0};
  CHECK(coordinate_max(UncertaintySet{bu}).isApprox(vec({3, 1.5})));

  Matrix a(2, 2);
  a << 0.5, 0, 0, 0.25;
  Ellipsoid el{vec({1, 2}), a};
  CHECK(coordinate_max(UncertaintySet{el}).isApprox(vec({1.5, 2.25})));
}

TEST_CASE("membership accepts the set and rejects outsiders") {
  std::mt19937 rng(7);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Instance inst = gen_random_instance(seed);
    const int n = inst.item_count();
    const Vector maxima = coordinate_max(inst.uncertainty);
    CHECK_FALSE(contains(inst.uncertainty, maxima + Vector::Constant(n, 1.0)));
    const Vector y = random_nonneg(rng, n);
    CHECK(contains(inst.uncertainty, support_max(inst.uncertainty, y).cert.c));
  }
  // nominal points belong to their sets
  Budgeted bu{vec({1, 2}), vec({1, 1}), 1.0};
  CHECK(contains(UncertaintySet{bu}, vec({1, 2})));
  CHECK(contains(UncertaintySet{bu}, vec({1.5, 2.5})));
  CHECK_FALSE(contains(UncertaintySet{bu}, vec({2, 3})));  // breaks the budget
}
