#include "helpers.hpp"

#include "cli.hpp"
#include "nsub/expr.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace nsub;
using nsub::test::P;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run(std::vector<std::string> args) {
  args.insert(args.begin(), "nsub");
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("nsub_cli_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

class ThreadsEnv {
 public:
  explicit ThreadsEnv(const char* value) {
    if (const char* old = std::getenv("NEWTON_SUBLEVEL_THREADS")) old_ = old;
    setenv("NEWTON_SUBLEVEL_THREADS", value, 1);
  }
  ~ThreadsEnv() {
    if (old_.empty()) unsetenv("NEWTON_SUBLEVEL_THREADS");
    else setenv("NEWTON_SUBLEVEL_THREADS", old_.c_str(), 1);
  }

 private:
  std::string old_;
};

// Cheap invocations of every command, used by the golden and determinism tests.
const std::vector<std::pair<std::string, std::vector<std::string>>>& catalog_runs() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> runs = {
      {"analyze_morse", {"analyze", "x^2+y^2"}},
      {"analyze_cusp", {"analyze", "y^2-x^3"}},
      {"analyze_vertex", {"analyze", "x^2*y^2+x^5"}},
      {"adapt_square", {"adapt", "(y-x^2)^2"}},
      {"adapt_hyperbolic", {"adapt", "x^2-y^2"}},
      {"resolve_hyperbolic", {"resolve", "y^2-x^2", "--samples", "64"}},
      {"resolve_double_root", {"resolve", "y^2-2*x^2*y+x^4-x^7", "--samples", "64"}},
      {"measure_square", {"measure", "(y-x^2)^2", "--samples", "4000", "--eps", "1e-6..1e-2:5", "--tol", "0.2"}},
      {"measure_grid", {"measure", "x^2+y^2", "--method", "GRID", "--eps", "1e-6..1e-3:4"}},
      {"oscillate_morse", {"oscillate", "x^2+y^2", "--lambda", "20..1000:4", "--samples", "4000", "--tol", "0.2"}},
      {"sweep_morse", {"sweep", "x^2+y^2", "x^2-y^2"}},
      {"sweep_vertex", {"sweep", "x^2*y^2+x^5", "y^7", "--t-grid", "-1,1/2,2"}},
      {"sweep_pair", {"sweep", "x^2*y^2+x^5", "x^5+y^4", "--ratios", "0,1,inf"}},
      {"check_vdc", {"check-vdc", "--count", "12"}},
  };
  return runs;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("parse_expression examples") {
  PhaseExpr a = parse_expression("x^2*y^2 + x^5");
  PuiseuxPoly want;
  want.add_term(1, 2, 2);
  want.add_term(1, 5, 0);
  CHECK(a.poly == want);
  CHECK(parse_expression("(y - x^2)^2").poly == P("y^2 - 2*x^2*y + x^4"));
  CHECK(parse_expression("x^(1/2) + y").poly.ramification() == 2);
  CHECK(parse_expression("-(x - y)^2").poly == P("-x^2 + 2*x*y - y^2"));
  CHECK(parse_expression("x^(-0)").poly == P("1"));
}

TEST_CASE("parse errors carry a position") {
  auto fails = [](const std::string& s, const std::string& fragment) {
    CAPTURE(s);
    try {
      parse_expression(s);
      FAIL("no error");
    } catch (const ParseError& e) {
      CHECK(e.line >= 1);
      CHECK(e.column >= 1);
      CHECK(std::string(e.what()).find(fragment) != std::string::npos);
    }
  };
  fails("", "parse error at 1:1");
  fails("x +", "parse error");
  fails("y^(1/2)", "fractional y-power");
  fails("x^(-1)", "negative x-power");
  fails("y^(-2)", "negative y-power");
  fails("(x + y)^(1/2)", "fractional power");
  fails("x^2 $ y", "parse error at 1:5");
  fails("x +\n  * y", "parse error at 2:3");
  fails("(x + y)^1000", "power exceeds");
}

TEST_CASE("round trip on the expression corpus") {
  std::ifstream in(std::string(NSUB_GOLDEN_DIR) + "/expressions.txt");
  REQUIRE(in);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    CAPTURE(line);
    PhaseExpr e = parse_expression(line);
    std::string printed = print_ast(*e.ast);
    PhaseExpr again = parse_expression(printed);
    CHECK(*again.ast == *e.ast);
    CHECK(print_ast(*again.ast) == printed);
    CHECK(again.poly == e.poly);
    // the canonical polynomial text parses back to the same polynomial
    CHECK(parse_expression(e.poly.is_zero() ? "0" : e.poly.to_string()).poly == e.poly);
    ++n;
  }
  CHECK(n == 100);
}

TEST_CASE("analyze reports") {
  RunResult r = run({"analyze", "x^2+y^2"});
  CHECK(r.code == cli::kOk);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema"] == "nsub-report/1");
  CHECK(j["command"] == "analyze");
  CHECK(j["status"] == "ok");
  CHECK(j["results"]["newton_distance"] == "1");
  CHECK(j["results"]["j"] == "1");
  CHECK(j["results"]["p"] == 0);

  const std::pair<const char*, std::pair<const char*, int>> catalog[] = {
      {"x^2+y^2", {"1", 0}},          {"x*y", {"1", 1}},           {"x^2-y^2", {"1", 1}},
      {"(y-x^2)^2", {"1/2", 0}},      {"x^2*y^2+x^5", {"1/2", 1}}, {"y^2-x^3", {"5/6", 0}}};
  for (const auto& [expr, want] : catalog) {
    CAPTURE(expr);
    RunResult a = run({"analyze", expr});
    REQUIRE(a.code == cli::kOk);
    auto k = nlohmann::json::parse(a.out);
    CHECK(k["results"]["j"] == want.first);
    CHECK(k["results"]["p"] == want.second);
  }
}

TEST_CASE("exit codes") {
  CHECK(run({"analyze", ""}).code == cli::kUsage);
  CHECK(run({"analyze", "y^(1/2)"}).code == cli::kUsage);
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"frobnicate"}).code == cli::kUsage);
  CHECK(run({"analyze"}).code == cli::kUsage);
  CHECK(run({"measure", "x*y", "--eps", "banana"}).code == cli::kUsage);
  CHECK(run({"measure", "x*y", "--method", "SIMPSON"}).code == cli::kUsage);
  CHECK(run({"resolve", "x*y", "--mode", "fuzzy"}).code == cli::kUsage);
  CHECK(run({"sweep", "x^2+y^2"}).code == cli::kUsage);
  CHECK(run({"analyze", "0"}).code != cli::kOk);
  CHECK(run({"--help"}).code == cli::kOk);
  CHECK(run({"--version"}).code == cli::kOk);

  // verification failure: an impossible tolerance on the fitted exponent
  RunResult v = run({"measure", "x^2+y^2", "--samples", "2000", "--eps", "1e-6..1e-2:5", "--tol", "0.0000001"});
  CHECK(v.code == cli::kVerificationFailed);
  CHECK(nlohmann::json::parse(v.out)["status"] == "verification_failed");

  // runtime failure: irrational branch in exact mode; the report is still written with a failure marker
  auto dir = scratch("runtime");
  RunResult f = run({"resolve", "y^2-2*x^2", "--out", dir.string()});
  CHECK(f.code == cli::kVerificationFailed);
  auto rep = nlohmann::json::parse(slurp(dir / "resolve.json"));
  CHECK(rep["status"] == "failed");
  CHECK(rep["results"]["error"].get<std::string>().find("numeric") != std::string::npos);
}

TEST_CASE("config file precedence") {
  auto dir = scratch("config");
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "# defaults\nsamples = 3000\nmeasure.eps = 1e-5..1e-2:4\ncheck-vdc.count = 5\ntol = 0.5\n";
  }
  RunResult a = run({"measure", "x^2+y^2", "--config", (dir / "run.cfg").string(), "--samples", "2500"});
  CHECK(a.code == cli::kOk);
  auto j = nlohmann::json::parse(a.out);
  CHECK(j["config"]["samples"] == "2500");
  CHECK(j["config"]["eps"] == "1e-5..1e-2:4");
  CHECK(j["results"]["samples"].size() == 4);
  {
    std::ofstream bad(dir / "bad.cfg");
    bad << "sampels = 3\n";
  }
  CHECK(run({"measure", "x*y", "--config", (dir / "bad.cfg").string()}).code == cli::kUsage);
  CHECK(run({"measure", "x*y", "--config", (dir / "missing.cfg").string()}).code == cli::kUsage);
}

TEST_CASE("output files") {
  auto dir = scratch("files");
  RunResult r = run({"measure", "x*y", "--samples", "2000", "--eps", "1e-5..1e-2:4", "--tol", "1", "--out", dir.string()});
  CHECK(r.code == cli::kOk);
  CHECK(slurp(dir / "measure.json") == r.out);
  std::string csv = slurp(dir / "measure.csv");
  CHECK(csv.rfind("epsilon,estimate,stderr,n,method\r\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  RunResult s = run({"sweep", "x^2+y^2", "x^2-y^2", "--out", dir.string()});
  CHECK(std::filesystem::exists(dir / "sweep.csv"));
  CHECK(s.code == cli::kOk);
}

TEST_CASE("golden reports") {
  const char* update = std::getenv("NSUB_UPDATE_GOLDEN");
  for (const auto& [name, args] : catalog_runs()) {
    CAPTURE(name);
    RunResult r = run(args);
    CHECK(r.code != cli::kUsage);
    std::filesystem::path gold = std::filesystem::path(NSUB_GOLDEN_DIR) / (name + ".json");
    if (update && std::string(update) == "1") {
      std::ofstream(gold, std::ios::binary) << r.out;
      continue;
    }
    REQUIRE(std::filesystem::exists(gold));
    CHECK(slurp(gold) == r.out);
  }
}

TEST_CASE("reports are identical across runs and thread counts") {
  for (const auto& [name, args] : catalog_runs()) {
    CAPTURE(name);
    std::string one, many, again;
    {
      ThreadsEnv t("1");
      one = run(args).out;
      again = run(args).out;
    }
    {
      ThreadsEnv t("4");
      many = run(args).out;
    }
    CHECK(one == again);
    CHECK(one == many);
  }
}

}  // TEST_SUITE
