#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "rtst/model.hpp"
#include "rtst/simplex.hpp"
#include "rtst/subproblems.hpp"
#include "rtst/types.hpp"

using namespace rtst;

namespace {

Vector vec(std::initializer_list<double> vals) {
  Vector v(static_cast<Eigen::Index>(vals.size()));
  int i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}

// exhaustive grid search over per-item choices: first stage, or k eps-units
double brute_selection(const CappedSubproblem& sub, double eps, int target,
                       int item, int units_left, double cost) {
  const int n = static_cast<int>(sub.first_stage_costs.size());
  const int per_item = static_cast<int>(std::lround(1.0 / eps));
  if (item == n)
    return units_left == 0 ? cost : std::numeric_limits<double>::infinity();
  double best = brute_selection(sub, eps, target, item + 1, units_left, cost);
  if (units_left >= per_item) {
    best = std::min(best, brute_selection(sub, eps, target, item + 1,
                                          units_left - per_item,
                                          cost + sub.first_stage_costs[item]));
  }
  const int cap_units = static_cast<int>(std::lround(sub.caps[item] / eps));
  for (int k = 1; k <= std::min(cap_units, units_left); ++k) {
    best = std::min(best, brute_selection(sub, eps, target, item + 1,
                                          units_left - k,
                                          cost + sub.c_nominal[item] * k * eps));
  }
  return best;
}

// per-group choice: one first-stage item, or a cheapest pour summing to one
double brute_rs_group(const CappedSubproblem& sub,
                      const std::vector<int>& group) {
  double best = std::numeric_limits<double>::infinity();
  for (int j : group) best = std::min(best, sub.first_stage_costs[j]);
  // cheapest continuous pour via a tiny lp
  const int g = static_cast<int>(group.size());
  LpProblem lp = LpProblem::with_vars(g);
  for (int a = 0; a < g; ++a) {
    lp.objective[a] = sub.c_nominal[group[a]];
    lp.upper[a] = sub.caps[group[a]];
  }
  lp.add_row(Vector::Ones(g), LpRelation::Equal, 1.0);
  const LpResult res = lp_solve(lp);
  if (res.status == LpStatus::Optimal) best = std::min(best, res.objective);
  return best;
}

// x-mask enumeration with an lp completing the unit flow
double brute_sp(const CappedSubproblem& sub) {
  const auto& sp = std::get<ShortestPath>(sub.structure);
  const int n = static_cast<int>(sub.first_stage_costs.size());
  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    Vector x = Vector::Zero(n);
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) x[i] = 1.0;
    LpProblem lp = LpProblem::with_vars(n);
    lp.objective = sub.c_nominal;
    for (int i = 0; i < n; ++i)
      lp.upper[i] = std::min(sub.caps[i], 1.0 - x[i]);
    for (int v = 0; v < sp.node_count; ++v) {
      Vector row = Vector::Zero(n);
      double rhs = (v == sp.source) ? 1.0 : (v == sp.sink ? -1.0 : 0.0);
      for (int a = 0; a < n; ++a) {
        if (sp.arcs[a].first == v) row[a] += 1.0;
        if (sp.arcs[a].second == v) row[a] -= 1.0;
        rhs -= 0.0;
      }
      // flow balance of x + y
      rhs -= row.dot(x);
      lp.add_row(row, LpRelation::Equal, rhs);
    }
    const LpResult res = lp_solve(lp);
    if (res.status != LpStatus::Optimal) continue;
    best = std::min(best, sub.first_stage_costs.dot(x) + res.objective);
  }
  return best;
}

std::vector<std::pair<int, int>> random_dag(std::mt19937& rng, int nodes,
                                            int extra) {
  std::vector<std::pair<int, int>> arcs;
  for (int v = 0; v + 1 < nodes; ++v) arcs.push_back({v, v + 1});
  std::uniform_int_distribution<int> pick(0, nodes - 1);
  for (int e = 0; e < extra; ++e) {
    int a = pick(rng), b = pick(rng);
    if (a > b) std::swap(a, b);
    if (a != b) arcs.push_back({a, b});
  }
  return arcs;
}

}  // namespace

TEST_CASE("selection grid dp matches exhaustive search") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> costd(0.0, 4.0);
  std::uniform_int_distribution<int> capd(0, 4);
  for (double eps : {1.0, 0.5, 0.25}) {
    const int per_item = static_cast<int>(std::lround(1.0 / eps));
    for (int tc = 0; tc < 25; ++tc) {
      const int n = 3 + tc % 4;
      const int p = 1 + tc % n;
      CappedSubproblem sub;
      sub.structure = Selection{p};
      sub.first_stage_costs = Vector::Zero(n);
      sub.c_nominal = Vector::Zero(n);
      sub.caps = Vector::Zero(n);
      for (int i = 0; i < n; ++i) {
        sub.first_stage_costs[i] = costd(rng);
        sub.c_nominal[i] = costd(rng);
        sub.caps[i] = std::min(1.0, capd(rng) * eps);
      }
      CAPTURE(eps);
      CAPTURE(tc);
      const double want =
          brute_selection(sub, eps, p * per_item, 0, p * per_item, 0.0);
      if (!std::isfinite(want)) {
        CHECK_THROWS_AS(capped_selection_dp(sub, eps), InfeasibleError);
        continue;
      }
      const CappedSolution got = capped_selection_dp(sub, eps);
      CHECK(got.value == doctest::Approx(want).epsilon(1e-9).scale(1.0));
      // solution consistency: mass p, caps respected, value reprices
      CHECK(got.x.sum() + got.y.sum() == doctest::Approx(double(p)));
      CHECK((got.y.array() <= sub.caps.array() + 1e-12).all());
      CHECK(got.value == doctest::Approx(sub.first_stage_costs.dot(got.x) +
                                         sub.c_nominal.dot(got.y)));
    }
  }
}

TEST_CASE("representative pours match the per-group optimum") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> costd(0.0, 4.0);
  std::uniform_int_distribution<int> capd(0, 4);
  for (int tc = 0; tc < 40; ++tc) {
    const int groups = 1 + tc % 3;
    std::vector<std::vector<int>> parts(groups);
    int n = 0;
    for (int g = 0; g < groups; ++g)
      for (int j = 0; j <= (tc + g) % 3; ++j) parts[g].push_back(n++);
    CappedSubproblem sub;
    sub.structure = RepSelection{parts};
    sub.first_stage_costs = Vector::Zero(n);
    sub.c_nominal = Vector::Zero(n);
    sub.caps = Vector::Zero(n);
    for (int i = 0; i < n; ++i) {
      sub.first_stage_costs[i] = costd(rng);
      sub.c_nominal[i] = costd(rng);
      sub.caps[i] = std::min(1.0, capd(rng) * 0.25);
    }
    double want = 0;
    for (const auto& g : parts) want += brute_rs_group(sub, g);
    CAPTURE(tc);
    const CappedSolution got = capped_rs_greedy(sub);
    CHECK(got.value == doctest::Approx(want).epsilon(1e-9).scale(1.0));
    CHECK(got.value == doctest::Approx(sub.first_stage_costs.dot(got.x) +
                                       sub.c_nominal.dot(got.y)));
    for (const auto& g : parts) {
      double mass = 0;
      for (int j : g) mass += got.x[j] + got.y[j];
      CHECK(mass == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("multigraph route matches mask enumeration on acyclic graphs") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> costd(0.05, 3.0);
  std::uniform_real_distribution<double> capd(0.0, 1.0);
  for (int tc = 0; tc < 30; ++tc) {
    const int nodes = 3 + tc % 3;
    const auto arcs = random_dag(rng, nodes, 2 + tc % 3);
    const int n = static_cast<int>(arcs.size());
    if (n > 8) continue;
    CappedSubproblem sub;
    sub.structure = ShortestPath{nodes, arcs, 0, nodes - 1};
    sub.first_stage_costs = Vector::Zero(n);
    sub.c_nominal = Vector::Zero(n);
    sub.caps = Vector::Zero(n);
    for (int i = 0; i < n; ++i) {
      sub.first_stage_costs[i] = costd(rng);
      sub.c_nominal[i] = costd(rng);
      sub.caps[i] = capd(rng);
    }
    CAPTURE(tc);
    const double want = brute_sp(sub);
    const CappedSolution got = capped_sp_multigraph(sub);
    CHECK(got.value == doctest::Approx(want).epsilon(1e-7).scale(1.0));
    CHECK(got.value == doctest::Approx(sub.first_stage_costs.dot(got.x) +
                                       sub.c_nominal.dot(got.y))
                           .epsilon(1e-9));
  }
}

TEST_CASE("multigraph reports unreachable sinks") {
  CappedSubproblem sub;
  sub.structure = ShortestPath{3, {{0, 1}, {2, 1}}, 0, 2};
  sub.first_stage_costs = vec({1, 1});
  sub.c_nominal = vec({1, 1});
  sub.caps = vec({1, 1});
  CHECK_THROWS_AS(capped_sp_multigraph(sub), InfeasibleError);
}

TEST_CASE("unit flow equals the flow lp") {
  std::mt19937 rng(47);
  std::uniform_real_distribution<double> costd(0.0, 3.0);
  std::uniform_real_distribution<double> wide(0.4, 1.0), tight(0.05, 0.5);
  int agreements = 0, infeasibles = 0;
  for (int tc = 0; tc < 60; ++tc) {
    const int nodes = 3 + tc % 4;
    auto arcs = random_dag(rng, nodes, 4);
    if (tc % 4 == 0) arcs.push_back({nodes - 2, 0});  // add a back arc
    const int m = static_cast<int>(arcs.size());
    Vector caps(m), costs(m);
    for (int a = 0; a < m; ++a) {
      caps[a] = (tc % 3 == 2) ? tight(rng) : wide(rng);
      costs[a] = costd(rng);
    }

    LpProblem lp = LpProblem::with_vars(m);
    lp.objective = costs;
    lp.upper = caps;
    for (int v = 0; v < nodes; ++v) {
      Vector row = Vector::Zero(m);
      for (int a = 0; a < m; ++a) {
        if (arcs[a].first == v) row[a] += 1.0;
        if (arcs[a].second == v) row[a] -= 1.0;
      }
      const double rhs = (v == 0) ? 1.0 : (v == nodes - 1 ? -1.0 : 0.0);
      lp.add_row(row, LpRelation::Equal, rhs);
    }
    const LpResult want = lp_solve(lp);

    CAPTURE(tc);
    const auto got =
        min_cost_unit_flow(nodes, arcs, caps, costs, 0, nodes - 1);
    if (want.status != LpStatus::Optimal) {
      CHECK_FALSE(got.has_value());
      ++infeasibles;
      continue;
    }
    REQUIRE(got.has_value());
    CHECK(got->cost ==
          doctest::Approx(want.objective).epsilon(1e-7).scale(1.0));
    CHECK(got->cost == doctest::Approx(costs.dot(got->flow)).epsilon(1e-9));
    CHECK((got->flow.array() >= -1e-12).all());
    CHECK((got->flow.array() <= caps.array() + 1e-12).all());
    ++agreements;
  }
  CHECK(agreements >= 25);
  CHECK(infeasibles >= 3);
}

TEST_CASE("unit flow rejects bad arguments") {
  const std::vector<std::pair<int, int>> arcs{{0, 1}};
  CHECK_THROWS_AS(
      min_cost_unit_flow(2, arcs, vec({1}), vec({-0.5}), 0, 1),
      ValidationError);
  CHECK_THROWS_AS(min_cost_unit_flow(2, arcs, vec({1}), vec({1}), 0, 0),
                  ValidationError);
}
