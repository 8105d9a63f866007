#include <chrono>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rtst/approx.hpp"
#include "rtst/deterministic.hpp"
#include "rtst/exact.hpp"
#include "rtst/io.hpp"
#include "rtst/model.hpp"
#include "rtst/oracle.hpp"
#include "rtst/types.hpp"
#include "rtst/uncertainty.hpp"

namespace {

using Json = nlohmann::ordered_json;
using namespace rtst;

Json num(double v) { return Json(format_number(v)); }

Json num_vector(const Vector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(num(v[i]));
  return arr;
}

Json int_vector(const Vector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    arr.push_back(static_cast<int>(std::lround(v[i])));
  return arr;
}

Vector parse_list(const std::string& text) {
  std::vector<double> vals;
  std::string token;
  for (char ch : text + ",") {
    if (ch == ',' || ch == ' ') {
      if (!token.empty()) {
        vals.push_back(std::stod(token));
        token.clear();
      }
    } else {
      token.push_back(ch);
    }
  }
  Vector v(static_cast<Eigen::Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) v[i] = vals[i];
  return v;
}

void emit(const Json& report, std::chrono::steady_clock::time_point started) {
  // Stdout stays a pure function of inputs; the timing goes to stderr.
  std::cout << report.dump(2) << "\n";
  const auto elapsed = std::chrono::duration<double, std::milli>(
      std::chrono::steady_clock::now() - started);
  std::cerr << "wall_time_ms " << elapsed.count() << "\n";
}

Json base_report(const std::string& path, const std::string& algorithm) {
  Json report;
  report["instance"] = path;
  report["algorithm"] = algorithm;
  return report;
}

void add_approx(Json& report, const ApproxResult& res) {
  report["value"] = num(res.value);
  if (res.guarantee) report["guarantee"] = num(*res.guarantee);
  if (res.lower_bound) report["lower_bound"] = num(*res.lower_bound);
  if (res.minmax_objective)
    report["minmax_objective"] = num(*res.minmax_objective);
  report["x"] = int_vector(res.x);
  report["y"] = num_vector(res.y);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robust two-stage solver toolkit"};
  app.require_subcommand(1);

  std::string path;
  std::string x_text;
  std::string scenario_text;
  bool use_nominal = false;
  bool use_centroid = false;
  double eps = 0.25;
  int limit = 12;
  int gap_m = 3;
  double mu = 0.01, gamma = 0.02, tight_eps = 0.01;
  std::uint64_t seed = 1;
  int max_n = 8;

  std::function<int()> action;
  const auto started = std::chrono::steady_clock::now();

  auto* exact_cmd = app.add_subcommand("exact", "optimal robust solution");
  exact_cmd->add_option("file", path)->required();
  exact_cmd->callback([&] {
    action = [&] {
      const Instance inst = load_instance(path);
      const TwoStageSolution sol = solve_exact(inst);
      Json report = base_report(path, "exact");
      report["value"] = num(sol.value);
      report["x"] = int_vector(sol.x);
      report["y"] = int_vector(sol.y);
      if (sol.worst_scenario)
        report["worst_scenario"] = num_vector(*sol.worst_scenario);
      emit(report, started);
      return 0;
    };
  });

  auto* relax_cmd = app.add_subcommand("relax", "continuous relaxation value");
  relax_cmd->add_option("file", path)->required();
  relax_cmd->callback([&] {
    action = [&] {
      const Instance inst = load_instance(path);
      Json report = base_report(path, "relax");
      report["value"] = num(relaxation_value(inst));
      emit(report, started);
      return 0;
    };
  });

  auto* eval_cmd = app.add_subcommand("eval", "worst case of a first stage");
  eval_cmd->add_option("file", path)->required();
  eval_cmd->add_option("--x", x_text, "binary first stage, comma separated")
      ->required();
  eval_cmd->callback([&] {
    action = [&] {
      const Instance inst = load_instance(path);
      const EvalResult res = eval(inst, parse_list(x_text));
      Json report = base_report(path, "eval");
      report["value"] = num(res.value);
      report["worst_scenario"] = num_vector(res.cert.c);
      report["y"] = num_vector(res.y);
      emit(report, started);
      return 0;
    };
  });

  auto* oracle_cmd = app.add_subcommand("oracle", "exhaustive ground truth");
  oracle_cmd->add_option("file", path)->required();
  oracle_cmd->add_option("--limit", limit, "enumeration size cap");
  oracle_cmd->callback([&] {
    action = [&] {
      const Instance inst = load_instance(path);
      const OracleReport res = oracle_solve(inst, limit);
      Json report = base_report(path, "oracle");
      report["value"] = num(res.value);
      report["x"] = int_vector(res.x);
      report["notes"] = res.notes;
      emit(report, started);
      return 0;
    };
  });

  auto* minmax_cmd =
      app.add_subcommand("minmax", "min-max bounds and solution");
  minmax_cmd->add_option("file", path)->required();
  minmax_cmd->callback([&] {
    action = [&] {
      const Instance inst = load_instance(path);
      const auto [bounds, res] = lb_ub_minmax(inst);
      Json report = base_report(path, "minmax");
      report["lower_bound"] = num(bounds.lower);
      report["upper_bound"] = num(bounds.upper);
      report["ratio"] = num(bounds.ratio);
      add_approx(report, res);
      emit(report, started);
      return 0;
    };
  });

  auto* scenario_cmd =
      app.add_subcommand("scenario", "two-stage solve under one scenario");
  scenario_cmd->add_option("file", path)->required();
  auto* opt_nominal =
      scenario_cmd->add_flag("--nominal", use_nominal, "use c_nominal");
  auto* opt_centroid = scenario_cmd->add_flag("--centroid", use_centroid,
                                              "use the vertex centroid");
  auto* opt_ct = scenario_cmd->add_option("--c-tilde", scenario_text,
                                          "explicit scenario, comma separated");
  opt_nominal->excludes(opt_centroid)->excludes(opt_ct);
  opt_centroid->excludes(opt_ct);
  scenario_cmd->callback([&] {
    action = [&] {
      const Instance inst = load_instance(path);
      Vector c_tilde;
      if (use_nominal) {
        const auto hs = halfspace_form(inst.uncertainty);
        if (const auto* ell = std::get_if<Ellipsoid>(&inst.uncertainty))
          c_tilde = ell->c_nominal;
        else if (hs)
          c_tilde = hs->c_nominal;
        else
          throw ValidationError("scenario: family has no nominal point");
      } else if (use_centroid) {
        const auto* vp = std::get_if<VPolytope>(&inst.uncertainty);
        if (!vp)
          throw ValidationError("scenario: centroid needs vertex scenarios");
        c_tilde = vertex_centroid(*vp);
      } else if (!scenario_text.empty()) {
        c_tilde = parse_list(scenario_text);
      } else {
        throw ValidationError(
            "scenario: pass --nominal, --centroid or --c-tilde");
      }
      const ApproxResult res = scenario_approx(inst, c_tilde);
      Json report = base_report(path, "scenario");
      add_approx(report, res);
      emit(report, started);
      return 0;
    };
  });

  auto* best_t_cmd =
      app.add_subcommand("best-t", "scenario with the best coordinate ratio");
  best_t_cmd->add_option("file", path)->required();
  best_t_cmd->callback([&] {
    action = [&] {
      const Instance inst = load_instance(path);
      const BestScenario res = best_t_scenario(inst);
      Json report = base_report(path, "best-t");
      report["t"] = num(res.t);
      report["c_tilde"] = num_vector(res.c_tilde);
      emit(report, started);
      return 0;
    };
  });

  auto* fptas_cmd = app.add_subcommand("fptas", "grid scheme, factor 1+eps");
  fptas_cmd->add_option("file", path)->required();
  fptas_cmd->add_option("--eps", eps, "grid step, 1/eps integral")->required();
  fptas_cmd->callback([&] {
    action = [&] {
      const Instance inst = load_instance(path);
      const ApproxResult res = fptas(inst, eps);
      Json report = base_report(path, "fptas");
      add_approx(report, res);
      emit(report, started);
      return 0;
    };
  });

  auto* round_cmd =
      app.add_subcommand("round", "relaxation rounding, factor 2");
  round_cmd->add_option("file", path)->required();
  round_cmd->callback([&] {
    action = [&] {
      const Instance inst = load_instance(path);
      ApproxResult res;
      if (std::holds_alternative<Selection>(inst.structure))
        res = round_selection(inst);
      else if (std::holds_alternative<RepSelection>(inst.structure))
        res = round_rs(inst);
      else
        throw ValidationError(
            "round: needs a selection or rep-selection structure");
      Json report = base_report(path, "round");
      add_approx(report, res);
      emit(report, started);
      return 0;
    };
  });

  auto* rs_cmd = app.add_subcommand(
      "rs-hp0", "exact rep-selection under budgeted uncertainty");
  rs_cmd->add_option("file", path)->required();
  rs_cmd->callback([&] {
    action = [&] {
      const Instance inst = load_instance(path);
      const TwoStageSolution sol = rs_hp0_exact(inst);
      Json report = base_report(path, "rs-hp0");
      report["value"] = num(sol.value);
      report["x"] = int_vector(sol.x);
      report["y"] = num_vector(sol.y);
      if (sol.worst_scenario)
        report["worst_scenario"] = num_vector(*sol.worst_scenario);
      emit(report, started);
      return 0;
    };
  });

  auto* l1_cmd =
      app.add_subcommand("l1", "linearized ellipsoid model, factor sqrt(q)");
  l1_cmd->add_option("file", path)->required();
  l1_cmd->callback([&] {
    action = [&] {
      const Instance inst = load_instance(path);
      const ApproxResult res = ellipsoid_l1_approx(inst);
      Json report = base_report(path, "l1");
      add_approx(report, res);
      emit(report, started);
      return 0;
    };
  });

  auto* vp2hp_cmd = app.add_subcommand(
      "reduce-vp2hp", "vertex set to halfspace set, value preserved");
  vp2hp_cmd->add_option("file", path)->required();
  vp2hp_cmd->callback([&] {
    action = [&] {
      std::cout << save_instance(reduce_vp_to_hp(load_instance(path)));
      return 0;
    };
  });

  auto* two2ell_cmd = app.add_subcommand(
      "reduce-2scen2ell", "two scenarios to an ellipsoid, value doubled");
  two2ell_cmd->add_option("file", path)->required();
  two2ell_cmd->callback([&] {
    action = [&] {
      std::cout << save_instance(
          reduce_two_scenario_to_ellipsoid(load_instance(path)));
      return 0;
    };
  });

  auto* gen_gap = app.add_subcommand("gen-selection-gap",
                                     "two-item selection with gap 4/3");
  gen_gap->callback([&] {
    action = [&] {
      std::cout << save_instance(gen_selection_gap_instance());
      return 0;
    };
  });

  auto* gen_sp = app.add_subcommand("gen-sp-gap",
                                    "parallel-route graph with gap m");
  gen_sp->add_option("--m", gap_m, "route count");
  gen_sp->callback([&] {
    action = [&] {
      std::cout << save_instance(gen_sp_gap_instance(gap_m));
      return 0;
    };
  });

  auto* gen_tight = app.add_subcommand("gen-tightness",
                                       "selection family with rounding ratio near 2");
  gen_tight->add_option("--mu", mu);
  gen_tight->add_option("--gamma", gamma);
  gen_tight->add_option("--eps", tight_eps);
  gen_tight->callback([&] {
    action = [&] {
      std::cout << save_instance(
          gen_selection_tightness_instance(mu, gamma, tight_eps));
      return 0;
    };
  });

  auto* gen_rand = app.add_subcommand("gen-random", "seeded random instance");
  gen_rand->add_option("--seed", seed, "generator seed");
  gen_rand->add_option("--max-n", max_n, "item cap");
  gen_rand->callback([&] {
    action = [&] {
      std::cout << save_instance(gen_random_instance(seed, max_n));
      return 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    return action();
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
