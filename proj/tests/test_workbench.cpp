#include <doctest.h>

#include <string>

#include "cab/cli/workbench.hpp"
#include "cab/error.hpp"
#include "cab/io/input.hpp"

using namespace cab;
using namespace cab::cli;

namespace {

std::string data(const char* name) { return std::string(CAB_TEST_DATA) + "/" + name; }

std::string parse_error(const std::string& text) {
  try {
    io::parse_input(text, "doc.toml");
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

const io::Json* find_identity(const io::Json& report, const std::string& suite, const std::string& prefix) {
  for (const auto& s : report["suites"])
    if (s["suite"] == suite)
      for (const auto& id : s["identities"])
        if (id["identity"].get<std::string>().rfind(prefix, 0) == 0) return &id;
  return nullptr;
}

}  // namespace

TEST_CASE("input errors carry a location and key path") {
  const std::string head = "schema = \"cabench.input/1\"\n";
  CHECK(parse_error(head + "[lie_algebra]\ndim = 2\nbrackets = [[1, 2, 3, \"1\"]]\n").find("doc.toml:4:") == 0);
  CHECK(parse_error(head + "[lie_algebra]\ndim = 2\nbrackets = [[1, 2, 3, \"1\"]]\n").find("lie_algebra.brackets[0]") !=
        std::string::npos);
  CHECK(parse_error(head + "[lie_algebra]\nbrackets = []\n").find("missing key 'dim'") != std::string::npos);
  CHECK(parse_error(head + "[nonsense]\n").find("unknown section") != std::string::npos);
  CHECK(parse_error("schema = \"other/2\"\n").find("unsupported schema") != std::string::npos);
  CHECK(parse_error(head + "[lie_algebra\n").find("doc.toml:2:") == 0);
  CHECK(parse_error(head + "[lenard]\nseed = []\nomega = []\n").find("needs an [algebroid]") != std::string::npos);
  CHECK(parse_error(head + "[flow]\ndim = 1\ndt = -1.0\n").find("flow.dt") != std::string::npos);
  CHECK_THROWS_AS(io::load_input(data("missing.toml")), ParseError);
  CHECK_THROWS_AS(io::load_input(data("bad_rational.toml")), ParseError);
}

TEST_CASE("input documents round-trip into structures") {
  const io::InputDocument d = io::load_input(data("oscillator.toml"));
  REQUIRE(d.algebroid);
  REQUIRE(d.lenard);
  CHECK(d.algebroid->anchor.size() == 4);
  CHECK(d.lenard->cap == 4);
  const io::InputDocument f = io::load_input(data("flow_quadratic.toml"));
  REQUIRE(f.flow);
  CHECK(f.flow->window == Window{1, -2, 1});
  CHECK(f.flow->watch == std::vector<int>{-1, 0, 1});
}

TEST_CASE("suite and window flags") {
  CHECK(parse_suites("").empty());
  CHECK(parse_suites("none").empty());
  CHECK(parse_suites("lenard,courant,lenard") == std::vector<std::string>{"lenard", "courant"});
  CHECK(parse_suites("lenard-certify") == std::vector<std::string>{"lenard"});
  CHECK_THROWS_AS(parse_suites("courant,"), ParseError);
  CHECK_THROWS_AS(parse_suites("jacobi"), ParseError);
  CHECK(parse_window("2:-3:1") == Window{2, -3, 1});
  CHECK_THROWS_AS(parse_window("2:1"), ParseError);
  CHECK_THROWS_AS(parse_window("1:2:-2"), ParseError);
  CHECK_THROWS_AS(parse_window("a:b:c"), ParseError);
}

TEST_CASE("verify") {
  WorkbenchConfig cfg;
  cfg.instances = 8;

  SUBCASE("empty selection certifies nothing and succeeds") {
    cfg.suites = std::vector<std::string>{};
    const CommandResult r = cmd_verify(cfg);
    CHECK(r.exit_code == kOk);
    CHECK(r.report["suites"].empty());
  }
  SUBCASE("corrupted structure constants name the failing triple") {
    cfg.inputs = {data("broken_jacobi.toml")};
    cfg.suites = std::vector<std::string>{"courant"};
    const CommandResult r = cmd_verify(cfg);
    CHECK(r.exit_code == kFailed);
    const io::Json* id = find_identity(r.report, "courant", "structure constants");
    REQUIRE(id);
    CHECK((*id)["witness"].get<std::string>().find("(e1,e2,e3)") != std::string::npos);
  }
  SUBCASE("input algebras replace the builtin ones") {
    cfg.inputs = {data("aff1.toml")};
    cfg.suites = std::vector<std::string>{"courant"};
    const CommandResult r = cmd_verify(cfg);
    CHECK(r.exit_code == kOk);
    CHECK(find_identity(r.report, "courant", "sympl_bracket Jacobi [aff1-input]"));
    CHECK_FALSE(find_identity(r.report, "courant", "sympl_bracket Jacobi [filiform4]"));
  }
  SUBCASE("fault-injection presets fail with witnesses") {
    cfg.suites = std::vector<std::string>{"lenard", "algebroid"};
    for (const char* p : {"split-pairs", "incompatible-q"}) {
      cfg.preset = p;
      CHECK(cmd_verify(cfg).exit_code == kFailed);
    }
    const CommandResult r = cmd_verify(cfg);
    const io::Json* id = find_identity(r.report, "algebroid", "d_E* certified");
    REQUIRE(id);
    CHECK((*id)["witness"].get<std::string>().find("nilpotency") != std::string::npos);
  }
  SUBCASE("a zero Q gives a degenerate but consistent chain") {
    cfg.suites = std::vector<std::string>{"lenard"};
    cfg.preset = "zero-q";
    const CommandResult r = cmd_verify(cfg);
    CHECK(r.exit_code == kOk);
    CHECK(r.report["suites"][0]["notes"]["hamiltonian stop"].get<std::string>().find("vanishes") != std::string::npos);
  }
  SUBCASE("unknown presets are input errors") {
    cfg.preset = "nope";
    CHECK_THROWS_AS(cmd_verify(cfg), ParseError);
  }
}

TEST_CASE("hierarchy") {
  WorkbenchConfig cfg;
  const CommandResult ok = cmd_hierarchy(cfg);
  CHECK(ok.exit_code == kOk);
  CHECK(ok.report["chain"]["length"] == 4);
  CHECK(ok.report["chain"]["hamiltonians"][1]["text"] == "3/2*x4^2 + 3/2*x3^2 + x2^2 + x1^2");

  cfg.inputs = {data("oscillator.toml")};
  const CommandResult in = cmd_hierarchy(cfg);
  CHECK(in.exit_code == kOk);
  CHECK(in.report["chain"]["hamiltonians"][1]["text"] == "3/2*x4^2 + 3/2*x3^2 + x2^2 + x1^2");

  cfg.inputs.clear();
  cfg.preset = "incompatible-q";
  const CommandResult bad = cmd_hierarchy(cfg);
  CHECK(bad.exit_code == kFailed);
  CHECK(bad.report["dstar"]["accepted"] == false);
  CHECK(bad.report["dstar"]["failed_identity"] == "nilpotency");

  cfg.preset = "split-pairs";
  const CommandResult split = cmd_hierarchy(cfg);
  CHECK(split.exit_code == kFailed);
  CHECK(split.report["first_failure"].get<std::string>().find("w_2") != std::string::npos);
}

TEST_CASE("flow") {
  WorkbenchConfig cfg;
  const CommandResult lin = cmd_flow(cfg);
  CHECK(lin.exit_code == kOk);
  CHECK(lin.report["diagnostics"]["rows"].size() == 101);
  CHECK(lin.report["checks"][0]["pass"] == true);

  cfg.preset = "quadratic";
  const CommandResult q = cmd_flow(cfg);
  CHECK(q.exit_code == kOk);
  CHECK(q.report["order_study"]["resolved"] == true);
  CHECK(q.report["snapshots"].size() == 11);

  cfg.preset.clear();
  cfg.inputs = {data("flow_quadratic.toml")};
  CHECK(cmd_flow(cfg).exit_code == kOk);

  cfg.inputs.clear();
  cfg.window = Window{2, -2, 2};
  cfg.preset = "linear-translation";
  CHECK(cmd_flow(cfg).report["window"]["radius"] == 2);
}

TEST_CASE("equal configurations give identical reports") {
  WorkbenchConfig cfg;
  cfg.instances = 6;
  cfg.seed = 42;
  CHECK(render(cmd_verify(cfg).report, Format::Json) == render(cmd_verify(cfg).report, Format::Json));
  cfg.preset = "quadratic";
  CHECK(render(cmd_flow(cfg).report, Format::Text) == render(cmd_flow(cfg).report, Format::Text));
  WorkbenchConfig other = cfg;
  other.seed = 43;
  CHECK(render(cmd_flow(cfg).report, Format::Json) != render(cmd_flow(other).report, Format::Json));
}
