#include "rtst/io.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "rtst/model.hpp"

namespace rtst {

namespace {

using Json = nlohmann::ordered_json;

Json number_to_json(double v) { return Json(format_number(v)); }

Json vector_to_json(const Vector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(number_to_json(v[i]));
  return arr;
}

Json matrix_to_json(const Matrix& m) {
  Json arr = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      arr.push_back(number_to_json(m(r, c)));
  return arr;
}

Json pairs_to_json(const std::vector<std::pair<int, int>>& pairs) {
  Json arr = Json::array();
  for (const auto& [a, b] : pairs) arr.push_back(Json::array({a, b}));
  return arr;
}

Json groups_to_json(const std::vector<std::vector<int>>& groups) {
  Json arr = Json::array();
  for (const auto& g : groups) arr.push_back(g);
  return arr;
}

[[noreturn]] void fail(const std::string& what) {
  throw ValidationError("parse: " + what);
}

const Json& field(const Json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) fail(std::string("missing field '") + name + "'");
  return *it;
}

double read_number(const Json& j, const char* name) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string& s = j.get_ref<const std::string&>();
    const char* begin = s.data();
    const char* end = begin + s.size();
    double value = 0.0;
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc() || res.ptr != end)
      fail(std::string("field '") + name + "' is not a number: " + s);
    return value;
  }
  fail(std::string("field '") + name + "' must be a number or decimal string");
}

int read_int(const Json& j, const char* name) {
  if (j.is_number_integer()) return j.get<int>();
  const double v = read_number(j, name);
  const int k = static_cast<int>(std::lround(v));
  if (std::abs(v - k) > 1e-9)
    fail(std::string("field '") + name + "' must be an integer");
  return k;
}

Vector read_vector(const Json& j, const char* name, int expect = -1) {
  if (!j.is_array()) fail(std::string("field '") + name + "' must be an array");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = read_number(j[i], name);
  if (expect >= 0 && v.size() != expect)
    fail(std::string("field '") + name + "' has the wrong length");
  return v;
}

Matrix read_matrix(const Json& j, const char* name, int rows, int cols) {
  const Vector flat = read_vector(j, name, rows * cols);
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = flat[r * cols + c];
  return m;
}

std::vector<std::pair<int, int>> read_pairs(const Json& j, const char* name) {
  if (!j.is_array()) fail(std::string("field '") + name + "' must be an array");
  std::vector<std::pair<int, int>> out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2)
      fail(std::string("entries of '") + name + "' must be index pairs");
    out.emplace_back(read_int(e[0], name), read_int(e[1], name));
  }
  return out;
}

std::vector<std::vector<int>> read_groups(const Json& j, const char* name) {
  if (!j.is_array()) fail(std::string("field '") + name + "' must be an array");
  std::vector<std::vector<int>> out;
  for (const auto& g : j) {
    if (!g.is_array())
      fail(std::string("entries of '") + name + "' must be index arrays");
    std::vector<int> group;
    for (const auto& e : g) group.push_back(read_int(e, name));
    out.push_back(std::move(group));
  }
  return out;
}

Structure parse_structure(const Json& j, int n) {
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "selection") return Selection{read_int(field(j, "p"), "p")};
  if (kind == "rep_selection")
    return RepSelection{read_groups(field(j, "partition"), "partition")};
  if (kind == "shortest_path") {
    ShortestPath sp;
    sp.node_count = read_int(field(j, "nodes"), "nodes");
    sp.arcs = read_pairs(field(j, "arcs"), "arcs");
    sp.source = read_int(field(j, "s"), "s");
    sp.sink = read_int(field(j, "t"), "t");
    return sp;
  }
  if (kind == "spanning_tree") {
    SpanningTree st;
    st.node_count = read_int(field(j, "nodes"), "nodes");
    st.edges = read_pairs(field(j, "edges"), "edges");
    return st;
  }
  if (kind == "all_ones") {
    (void)n;
    return AllOnes{};
  }
  fail("unknown structure kind '" + kind + "'");
}

UncertaintySet parse_uncertainty(const Json& j, int n) {
  const std::string family = field(j, "family").get<std::string>();
  if (family == "h_polytope") {
    HPolytope u;
    u.c_nominal = read_vector(field(j, "c_nominal"), "c_nominal", n);
    u.b = read_vector(field(j, "b"), "b");
    u.A = read_matrix(field(j, "A"), "A", static_cast<int>(u.b.size()), n);
    return u;
  }
  if (family == "v_polytope") {
    VPolytope u;
    const Json& verts = field(j, "vertices");
    if (!verts.is_array()) fail("field 'vertices' must be an array");
    for (const auto& v : verts)
      u.vertices.push_back(read_vector(v, "vertices", n));
    return u;
  }
  if (family == "ellipsoid") {
    Ellipsoid u;
    u.c_nominal = read_vector(field(j, "c_nominal"), "c_nominal", n);
    const Json& a = field(j, "A");
    if (!a.is_array() || a.size() % n != 0)
      fail("field 'A' must hold n x q row-major entries");
    u.A = read_matrix(a, "A", n, static_cast<int>(a.size()) / n);
    return u;
  }
  if (family == "budgeted") {
    Budgeted u;
    u.c_nominal = read_vector(field(j, "c_nominal"), "c_nominal", n);
    u.d = read_vector(field(j, "d"), "d", n);
    u.gamma = read_number(field(j, "gamma"), "gamma");
    return u;
  }
  if (family == "multi_budget") {
    MultiBudget u;
    u.c_nominal = read_vector(field(j, "c_nominal"), "c_nominal", n);
    u.subsets = read_groups(field(j, "subsets"), "subsets");
    u.budgets = read_vector(field(j, "gammas"), "gammas",
                            static_cast<int>(u.subsets.size()));
    return u;
  }
  fail("unknown uncertainty family '" + family + "'");
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string save_instance(const Instance& inst) {
  Json out;
  out["n"] = inst.item_count();
  out["first_stage_costs"] = vector_to_json(inst.first_stage_costs);

  Json s;
  std::visit(
      [&](const auto& st) {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, Selection>) {
          s["kind"] = "selection";
          s["p"] = st.p;
        } else if constexpr (std::is_same_v<T, RepSelection>) {
          s["kind"] = "rep_selection";
          s["partition"] = groups_to_json(st.groups);
        } else if constexpr (std::is_same_v<T, ShortestPath>) {
          s["kind"] = "shortest_path";
          s["nodes"] = st.node_count;
          s["arcs"] = pairs_to_json(st.arcs);
          s["s"] = st.source;
          s["t"] = st.sink;
        } else if constexpr (std::is_same_v<T, SpanningTree>) {
          s["kind"] = "spanning_tree";
          s["nodes"] = st.node_count;
          s["edges"] = pairs_to_json(st.edges);
        } else {
          s["kind"] = "all_ones";
        }
      },
      inst.structure);
  out["structure"] = std::move(s);

  Json u;
  std::visit(
      [&](const auto& un) {
        using T = std::decay_t<decltype(un)>;
        if constexpr (std::is_same_v<T, HPolytope>) {
          u["family"] = "h_polytope";
          u["c_nominal"] = vector_to_json(un.c_nominal);
          u["A"] = matrix_to_json(un.A);
          u["b"] = vector_to_json(un.b);
        } else if constexpr (std::is_same_v<T, VPolytope>) {
          u["family"] = "v_polytope";
          Json verts = Json::array();
          for (const auto& v : un.vertices) verts.push_back(vector_to_json(v));
          u["vertices"] = std::move(verts);
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          u["family"] = "ellipsoid";
          u["c_nominal"] = vector_to_json(un.c_nominal);
          u["A"] = matrix_to_json(un.A);
        } else if constexpr (std::is_same_v<T, Budgeted>) {
          u["family"] = "budgeted";
          u["c_nominal"] = vector_to_json(un.c_nominal);
          u["d"] = vector_to_json(un.d);
          u["gamma"] = number_to_json(un.gamma);
        } else {
          u["family"] = "multi_budget";
          u["c_nominal"] = vector_to_json(un.c_nominal);
          u["subsets"] = groups_to_json(un.subsets);
          u["gammas"] = vector_to_json(un.budgets);
        }
      },
      inst.uncertainty);
  out["uncertainty"] = std::move(u);
  return out.dump(2) + "\n";
}

Instance parse_instance(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    fail(e.what());
  }
  if (!j.is_object()) fail("top level must be an object");
  const int n = read_int(field(j, "n"), "n");
  if (n < 1) fail("'n' must be positive");
  Instance inst;
  inst.first_stage_costs =
      read_vector(field(j, "first_stage_costs"), "first_stage_costs", n);
  inst.structure = parse_structure(field(j, "structure"), n);
  inst.uncertainty = parse_uncertainty(field(j, "uncertainty"), n);
  validate_instance(inst);
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open instance file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

void write_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write instance file: " + path);
  out << save_instance(inst);
}

}  // namespace rtst
