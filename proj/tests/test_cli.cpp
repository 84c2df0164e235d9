#include "support.hpp"

#include "dirac/cli.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dirac;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

fs::path scenario_dir() { return fs::path(DIRAC_SCENARIO_DIR); }

fs::path write_temp(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "dirac_reduce_tests";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

const char* kMinimal = R"({"n": 2, "dirac": {"bivector": [[0, 1], [-1, 0]]},
  "action": {"circle": {"weights": [1]}}, "samples": {"explicit": [[1, 0]]}})";

}  // namespace

TEST_CASE("minimal scenario loads") {
  const Scenario s = parse_scenario(json::parse(kMinimal));
  CHECK(s.n == 2);
  CHECK(s.dirac.kind() == "bivector");
  REQUIRE(s.action.circle);
  CHECK(s.action.circle->fixed_dim == 0);
  CHECK(sample_points(s).size() == 1);
  CHECK(s.tolerances.rank_tol == 1e-9);
  CHECK(s.tolerances.agree_tol == 1e-8);
}

TEST_CASE("scenario validation errors name the offending field") {
  auto err = [](const std::string& text) {
    try {
      parse_scenario(json::parse(text));
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  const std::string asym = err(R"({"n": 2, "dirac": {"bivector": [[0, 1], [1, 0]]}})");
  CHECK(asym.find("bivector[0][1]") != std::string::npos);
  const std::string closure =
      err(R"({"n": 2, "dirac": {"bivector": [[0, 1], [-1, 0]]}, "action": {"finite": [[[1, 0], [0, 1]], [[0, -1], [1, 0]]]}})");
  CHECK(closure.find("product of elements 1 * 1") != std::string::npos);
  CHECK(err(R"({"dirac": {}})").find("'n'") != std::string::npos);
  CHECK(err(R"({"n": 2, "dirac": {"bivector": [[0, "x^"], [0, 0]]}})").find("dirac.bivector[0][1]") != std::string::npos);
  CHECK(err(R"({"version": "other/9", "n": 1, "dirac": {"distribution": []}})").find("version") != std::string::npos);
  CHECK(err(R"({"n": 2, "dirac": {"bivector": [[0, 1], [-1, 0]], "two_form": [[0, 1], [-1, 0]]}})").find("exactly one") !=
        std::string::npos);
  CHECK(err(R"({"n": 2, "dirac": {"distribution": []}, "samples": {"explicit": [[1, 2, 3]]}})").find("samples.explicit[0]") !=
        std::string::npos);
}

TEST_CASE("JSON syntax errors carry line and column") {
  try {
    parse_json_text("{\n  \"n\": 2,\n  oops\n}", "bad.json");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(std::string(e.what()).find("bad.json:3:") != std::string::npos);
  }
}

TEST_CASE("scenario echo round-trips") {
  for (const auto& entry : fs::directory_iterator(scenario_dir())) {
    const Scenario s = load_scenario(entry.path());
    const auto echo = scenario_to_json(s);
    const Scenario again = parse_scenario(json::parse(echo.dump()));
    CHECK(scenario_to_json(again) == echo);
    CHECK(sample_points(again).size() == sample_points(s).size());
    const auto p = sample_points(s), q = sample_points(again);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(p[i] == q[i]);
  }
  // Rational strings and section-variant scenarios survive too.
  const Scenario sec = parse_scenario(json::parse(R"({"n": 1, "dirac": {"sections": [{"X": ["x"], "alpha": ["0"]}],
    "basepoint": [1]}, "action": {"finite": [[["1"]]]}, "tolerances": {"rank_tol": "1/1000000000"}})"));
  CHECK(scenario_to_json(parse_scenario(json::parse(scenario_to_json(sec).dump()))) == scenario_to_json(sec));
}

TEST_CASE("random samples are seeded and boxed") {
  Scenario s = parse_scenario(json::parse(R"({"n": 3, "dirac": {"distribution": [[1, 0, 0]]},
    "samples": {"random": {"count": 50, "seed": 9, "box": [[0, 1], [-3, -2], [5, 5]]}}})"));
  const auto a = sample_points(s), b = sample_points(s);
  REQUIRE(a.size() == 50);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == b[i]);
    CHECK(a[i](0) >= 0.0);
    CHECK(a[i](0) < 1.0);
    CHECK(a[i](1) >= -3.0);
    CHECK(a[i](2) == 5.0);
  }
  s.samples.random->seed = 10;
  CHECK(sample_points(s)[0] != a[0]);
}

TEST_CASE("run: passing scenario, json") {
  const Run r = cli({"run", (scenario_dir() / "circle_canonical.json").string()});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["summary"]["failures"] == 0);
  CHECK(j["summary"]["max_distance"].get<double>() < 1e-8);
  CHECK(j["points"].size() == 21);
  CHECK(j["scenario"]["version"] == kScenarioVersion);
}

TEST_CASE("run: non-invariant two-form fails invariance, text") {
  const fs::path p = write_temp("xarea.json", R"({"n": 2, "dirac": {"two_form": [[0, "x"], ["-x", 0]]},
    "action": {"circle": {"weights": [1]}}, "samples": {"explicit": [[1, 0.5], [0.3, -0.2]]}})");
  const Run r = cli({"run", p.string(), "--format", "text"});
  CHECK(r.code == 1);
  CHECK(r.out.find("invariance: FAIL (ξ=1, point (") != std::string::npos);
  CHECK(r.out.find("residual") != std::string::npos);
  const Run j = cli({"run", p.string()});
  const json doc = json::parse(j.out);
  for (const auto& pt : doc["points"]) CHECK(pt["status"] == "not_applicable");
  CHECK(doc["summary"]["invariance"] == "fail");
}

TEST_CASE("run: empty sample set is a valid empty report") {
  const fs::path p = write_temp("empty.json", R"({"n": 2, "dirac": {"bivector": [[0, 1], [-1, 0]]}})");
  const Run r = cli({"run", p.string()});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["points"].empty());
  CHECK(j["summary"]["points"] == 0);
}

TEST_CASE("run: flags override the scenario") {
  const fs::path p = write_temp("flags.json", R"({"n": 2, "dirac": {"bivector": [[0, 1], [-1, 0]]},
    "action": {"circle": {"weights": [1]}}})");
  const Run r = cli({"run", p.string(), "--samples", "7", "--seed", "3", "--rank-tol", "1e-10", "--agree-tol", "1e-7",
                     "--quad-nodes", "16"});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["points"].size() == 7);
  CHECK(j["scenario"]["samples"]["random"]["seed"] == 3);
  CHECK(j["scenario"]["tolerances"]["rank_tol"] == 1e-10);
  CHECK(j["scenario"]["quadrature_nodes"] == 16);
}

TEST_CASE("run: boundary points are skipped rows") {
  const fs::path p = write_temp("skip.json", R"({"n": 2, "dirac": {"distribution": [[1, 0], [0, 1]]},
    "action": {"finite": [[[1, 0], [0, 1]], [[1, 0], [0, -1]]]}, "samples": {"explicit": [[1, 1e-6], [1, 1]]}})");
  const Run r = cli({"run", p.string()});
  const json j = json::parse(r.out);
  CHECK(j["summary"]["skipped"] == 1);
  CHECK(j["points"][0]["status"] == "skipped");
  CHECK(j["points"][0].contains("reason"));
  CHECK(r.code == 0);
}

TEST_CASE("report is independent of the thread count") {
  const std::string f = (scenario_dir() / "z2_circle_r3.json").string();
  const Run one = cli({"run", f, "--threads", "1"});
  const Run many = cli({"run", f, "--threads", "8"});
  CHECK(one.code == many.code);
  CHECK(one.out == many.out);
}

TEST_CASE("input errors exit 2") {
  CHECK(cli({"run", "/nonexistent/file.json"}).code == 2);
  CHECK(cli({"run", (scenario_dir() / "circle_canonical.json").string(), "--format", "yaml"}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({}).code == 2);
  const fs::path bad = write_temp("bad.json", "{\"n\": 2,, }");
  const Run r = cli({"validate", bad.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("bad.json:1:") != std::string::npos);
}

TEST_CASE("validate") {
  const Run r = cli({"validate", (scenario_dir() / "dihedral_distribution.json").string()});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("ok: ", 0) == 0);
  CHECK(r.out.find("|F|=8") != std::string::npos);
}

TEST_CASE("bracket") {
  const fs::path p = write_temp("bracket.json", R"({"n": 2, "s1": {"X": ["1", "0"], "alpha": ["y", "0"]},
    "s2": {"X": ["0", "1"], "alpha": ["0", "0"]}})");
  const Run t = cli({"bracket", p.string()});
  CHECK(t.code == 0);
  CHECK(t.out.find("courant: X = [0, 0], alpha = [-1, 0]") != std::string::npos);
  CHECK(t.out.find("pairing: 0") != std::string::npos);
  const Run j = cli({"bracket", p.string(), "--format", "json"});
  const json doc = json::parse(j.out);
  CHECK(doc["courant"]["alpha"][0] == "-1");
  // Dorfman = Courant + 1/2 d<s1, s2>; the pairing is 0 here.
  CHECK(doc["dorfman"] == doc["courant"]);
  const fs::path bad = write_temp("bracket_bad.json", R"({"n": 2, "s1": {"X": ["1"], "alpha": ["y", "0"]}})");
  CHECK(cli({"bracket", bad.string()}).code == 2);
}
