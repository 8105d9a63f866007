#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "json.hpp"
#include "rtst/approx.hpp"
#include "rtst/exact.hpp"
#include "rtst/io.hpp"
#include "rtst/oracle.hpp"
#include "rtst/types.hpp"

using namespace rtst;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(RTST_BIN) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string stash(const std::string& text, const std::string& name) {
  const std::string path = "/tmp/" + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("pipeline reproduces the module values") {
  const RunResult gen = run("gen-selection-gap");
  REQUIRE(gen.code == 0);
  const std::string path = stash(gen.out, "rtst_cli_gap.json");
  const Instance inst = parse_instance(gen.out);

  const RunResult ex = run("exact " + path);
  REQUIRE(ex.code == 0);
  const auto ex_doc = nlohmann::json::parse(ex.out);
  CHECK(ex_doc.at("value").get<std::string>() ==
        format_number(solve_exact(inst).value));
  CHECK(ex_doc.at("algorithm").get<std::string>() == "exact");

  const RunResult rx = run("relax " + path);
  REQUIRE(rx.code == 0);
  CHECK(nlohmann::json::parse(rx.out).at("value").get<std::string>() ==
        format_number(relaxation_value(inst)));

  const RunResult orc = run("oracle " + path);
  REQUIRE(orc.code == 0);
  CHECK(nlohmann::json::parse(orc.out).at("value").get<std::string>() ==
        format_number(oracle_solve(inst).value));
}

TEST_CASE("byte-identical reruns") {
  for (const std::string args :
       {std::string("gen-random --seed 9"), std::string("gen-tightness")}) {
    const RunResult a = run(args);
    const RunResult b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
  }
  const RunResult gen = run("gen-random --seed 9");
  const std::string path = stash(gen.out, "rtst_cli_seed9.json");
  const RunResult a = run("exact " + path);
  const RunResult b = run("exact " + path);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("rounding subcommand matches the library") {
  const RunResult gen = run("gen-tightness --mu 0.01 --gamma 0.02 --eps 0.01");
  REQUIRE(gen.code == 0);
  const std::string path = stash(gen.out, "rtst_cli_tight.json");
  const Instance inst = parse_instance(gen.out);
  const RunResult rounded = run("round " + path);
  REQUIRE(rounded.code == 0);
  CHECK(nlohmann::json::parse(rounded.out).at("value").get<std::string>() ==
        format_number(round_selection(inst).value));
}

TEST_CASE("rewrite subcommands emit loadable instances") {
  const RunResult gen = run("gen-random --seed 7 --max-n 5");
  REQUIRE(gen.code == 0);
  const std::string path = stash(gen.out, "rtst_cli_vp.json");
  const RunResult hp = run("reduce-vp2hp " + path);
  REQUIRE(hp.code == 0);
  const Instance reduced = parse_instance(hp.out);
  CHECK(std::holds_alternative<HPolytope>(reduced.uncertainty));
  CHECK(solve_exact(reduced).value ==
        doctest::Approx(solve_exact(parse_instance(gen.out)).value)
            .epsilon(1e-6));
}

TEST_CASE("exit codes distinguish failure kinds") {
  CHECK(run("exact /tmp/rtst_cli_definitely_missing.json").code == 2);
  CHECK(run("").code == 2);                      // no subcommand
  CHECK(run("scenario /dev/null").code == 2);    // unreadable instance

  const RunResult gen = run("gen-random --seed 9");  // ellipsoid family
  const std::string path = stash(gen.out, "rtst_cli_ell.json");
  REQUIRE(std::holds_alternative<Ellipsoid>(
      parse_instance(gen.out).uncertainty));
  CHECK(run("fptas --eps 0.25 " + path).code == 2);  // wrong family
  const RunResult scen = run("scenario " + path);
  CHECK(scen.code == 2);  // no scenario flag given

  const RunResult gap = run("gen-selection-gap");
  const std::string gap_path = stash(gap.out, "rtst_cli_gap2.json");
  CHECK(run("eval --x 1,0,1 " + gap_path).code == 2);  // wrong length
  CHECK(run("oracle --limit 1 " + gap_path).code == 2);
}
