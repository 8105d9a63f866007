#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <string>

#include "rtst/io.hpp"
#include "rtst/model.hpp"
#include "rtst/types.hpp"

using namespace rtst;

namespace {

Vector vec(std::initializer_list<double> vals) {
  Vector v(static_cast<Eigen::Index>(vals.size()));
  int i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("save and parse round-trip byte for byte") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CAPTURE(seed);
    const Instance inst = gen_random_instance(seed, 8);
    const std::string text = save_instance(inst);
    const Instance back = parse_instance(text);
    CHECK(save_instance(back) == text);
  }
  for (std::uint64_t seed : {1, 2, 3}) {
    const Instance tree = gen_random_tree_instance(seed);
    const std::string text = save_instance(tree);
    CHECK(save_instance(parse_instance(text)) == text);
  }
  for (const Instance& inst :
       {gen_selection_gap_instance(), gen_sp_gap_instance(3),
        gen_selection_tightness_instance(0.01, 0.02, 0.01)}) {
    const std::string text = save_instance(inst);
    CHECK(save_instance(parse_instance(text)) == text);
  }
}

TEST_CASE("file round-trip") {
  const std::string path = "/tmp/rtst_io_test_instance.json";
  const Instance inst = gen_random_instance(42, 8);
  write_instance(inst, path);
  const Instance back = load_instance(path);
  CHECK(save_instance(back) == save_instance(inst));
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_instance("/tmp/rtst_io_no_such_file.json"),
                  ValidationError);
}

TEST_CASE("plain json numbers are accepted") {
  const std::string text = R"({
    "n": 2,
    "first_stage_costs": [1.5, 2],
    "structure": {"kind": "selection", "p": 1},
    "uncertainty": {"family": "v_polytope", "vertices": [[2, 0], [0, 2.25]]}
  })";
  const Instance inst = parse_instance(text);
  CHECK(inst.item_count() == 2);
  CHECK(inst.first_stage_costs[0] == 1.5);
  CHECK(inst.first_stage_costs[1] == 2.0);
  const auto& vp = std::get<VPolytope>(inst.uncertainty);
  REQUIRE(vp.vertices.size() == 2);
  CHECK(vp.vertices[1][1] == 2.25);
  // mixing strings and numbers is fine too
  const std::string mixed = R"({
    "n": 1,
    "first_stage_costs": ["0.1"],
    "structure": {"kind": "all_ones"},
    "uncertainty": {"family": "budgeted", "c_nominal": [1],
                    "d": ["0.5"], "gamma": 0.25}
  })";
  CHECK(std::get<Budgeted>(parse_instance(mixed).uncertainty).gamma == 0.25);
}

TEST_CASE("every structure and family survives a reparse") {
  // one hand-built instance per kind, saved, reparsed, and saved again
  Instance sp;
  sp.first_stage_costs = Vector::Constant(3, 1.0);
  sp.structure = ShortestPath{3, {{0, 1}, {1, 2}, {0, 2}}, 0, 2};
  sp.uncertainty = Ellipsoid{Vector::Constant(3, 1.0), Matrix::Identity(3, 3)};
  validate_instance(sp);
  const std::string text = save_instance(sp);
  const Instance back = parse_instance(text);
  const auto& st = std::get<ShortestPath>(back.structure);
  CHECK(st.arcs.size() == 3);
  CHECK(st.source == 0);
  CHECK(st.sink == 2);
  CHECK(save_instance(back) == text);

  Instance rs;
  rs.first_stage_costs = Vector::Constant(4, 2.0);
  rs.structure = RepSelection{{{0, 1}, {2, 3}}};
  rs.uncertainty =
      MultiBudget{Vector::Constant(4, 1.0), {{0, 1}, {2, 3}}, vec({0.5, 0.5})};
  validate_instance(rs);
  CHECK(save_instance(parse_instance(save_instance(rs))) ==
        save_instance(rs));
}

TEST_CASE("malformed input names the problem") {
  CHECK_THROWS_AS(parse_instance("not json at all"), ValidationError);
  CHECK_THROWS_AS(parse_instance("{}"), ValidationError);
  // missing structure
  CHECK_THROWS_AS(parse_instance(R"({"n": 1, "first_stage_costs": [1],
    "uncertainty": {"family": "v_polytope", "vertices": [[1]]}})"),
                  ValidationError);
  // unknown kind
  CHECK_THROWS_AS(parse_instance(R"({"n": 1, "first_stage_costs": [1],
    "structure": {"kind": "matroid"},
    "uncertainty": {"family": "v_polytope", "vertices": [[1]]}})"),
                  ValidationError);
  // unknown family
  CHECK_THROWS_AS(parse_instance(R"({"n": 1, "first_stage_costs": [1],
    "structure": {"kind": "all_ones"},
    "uncertainty": {"family": "box", "lo": [0], "hi": [1]}})"),
                  ValidationError);
  // vector length clash
  CHECK_THROWS_AS(parse_instance(R"({"n": 2, "first_stage_costs": [1],
    "structure": {"kind": "all_ones"},
    "uncertainty": {"family": "v_polytope", "vertices": [[1, 1]]}})"),
                  ValidationError);
  // vertex dimension clash
  CHECK_THROWS_AS(parse_instance(R"({"n": 2, "first_stage_costs": [1, 1],
    "structure": {"kind": "all_ones"},
    "uncertainty": {"family": "v_polytope", "vertices": [[1]]}})"),
                  ValidationError);
  // negative first-stage cost fails validation on parse
  CHECK_THROWS_AS(parse_instance(R"({"n": 1, "first_stage_costs": [-1],
    "structure": {"kind": "all_ones"},
    "uncertainty": {"family": "v_polytope", "vertices": [[1]]}})"),
                  ValidationError);
  // non-numeric entry
  CHECK_THROWS_AS(parse_instance(R"({"n": 1, "first_stage_costs": ["abc"],
    "structure": {"kind": "all_ones"},
    "uncertainty": {"family": "v_polytope", "vertices": [[1]]}})"),
                  ValidationError);
}

TEST_CASE("number formatting reads back exactly") {
  for (double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 2.0 / 3.0, 1e-30, 1e300,
                   123456.789, 4.9406564584124654e-324}) {
    const std::string s = format_number(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  // shortest form: plain values stay short
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(0.5) == "0.5");
}
