#include "catch_amalgamated.hpp"

#include "evodd/error.hpp"
#include "evodd/harness.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace evodd;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("evodd_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void expect_config_error(const std::string& json, const std::string& fragment) {
  try {
    parse_config(json);
    FAIL("expected a configuration error for " << json);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::configuration);
    CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring(fragment));
  }
}

}  // namespace

TEST_CASE("minimal config is completed with defaults", "[harness][config]") {
  const auto c = parse_config(R"({"geometry": {"dim": 1}})");
  CHECK(c.geometry.resolution == 64);
  CHECK(c.geometry.gamma == 0.5);
  CHECK(c.method.method == Method::robin_robin);
  CHECK(c.method.s0 == 1.0);
  CHECK(c.method.s1 == 0.5);
  CHECK(c.method.s2 == 0.25);
  CHECK(c.time.steps == 64);
  const auto c2 = parse_config(R"({"geometry": {"dim": 2}})");
  CHECK(c2.geometry.resolution == 16);
  // the echo parses back to the same config
  CHECK(dump_config(parse_config(dump_config(c))) == dump_config(c));
}

TEST_CASE("config errors name the problem", "[harness][config]") {
  expect_config_error(R"({"geometry": {"dim": 1, "resolution": 64, "gamma": 0.3}})", "grid line");
  expect_config_error(R"({"evolution": {"kind": "axis_stretch", "a": [0.95]}})", "0.9");
  expect_config_error(R"({"geometry": {"resolutoin": 64}})", "resolution");
  expect_config_error(R"({"methd": {}})", "method");
  expect_config_error(R"({"method": {"name": "robin_robin", "s0": -1}})", "s0");
  expect_config_error(R"({"geometry": {"dim": 1}, "evolution": {"kind": "axis_stretch", "a": [0.3, 0.1]}})", "a");
  CHECK_THROWS_AS(parse_config("{not json"), Error);
}

TEST_CASE("DD solve with exact data equals the monolithic solve", "[harness][oracle]") {
  for (const char* json : {R"({"geometry": {"dim": 1, "resolution": 32}, "time": {"steps": 16},
                               "evolution": {"kind": "translation", "b": [0.5]}})",
                           R"({"geometry": {"dim": 2, "resolution": 8}, "time": {"steps": 8},
                               "evolution": {"kind": "axis_stretch", "a": [0.3, 0.2]}})"}) {
    const auto eq = compare_dd_vs_monolithic(parse_config(json));
    CHECK(eq.monolithic_max > 0.0);
    CHECK(eq.max_rel_diff <= 1e-10);
  }
}

TEST_CASE("run writes history, summary and field dumps", "[harness]") {
  auto c = parse_config(R"({"geometry": {"dim": 1, "resolution": 16}, "time": {"steps": 16},
                           "evolution": {"kind": "axis_stretch", "a": [0.3]},
                           "outputs": {"emit_fields": true}})");
  const auto dir = scratch("run");
  const auto result = run_experiment(c, dir);
  CHECK(result.report.status == Status::converged);
  const std::string history = slurp(dir / "history.csv");
  CHECK(history.rfind("n,err_Z,err_L2,increment_Z,pairing,wallclock_ms\n", 0) == 0);
  CHECK(std::count(history.begin(), history.end(), '\n') == result.report.iterations + 1);
  CHECK_THAT(slurp(dir / "summary.txt"), Catch::Matchers::ContainsSubstring("status: converged"));

  // field dumps are in physical coordinates: the last node of Omega_2 sits at Phi_T(1)
  const std::string last = slurp(dir / "fields" / "level_0016.txt");
  CHECK(last.rfind("subdomain x value\n", 0) == 0);
  std::istringstream lines(last);
  std::string line;
  std::string tail;
  while (std::getline(lines, line)) tail = line;
  std::istringstream fields(tail);
  int sub = 0;
  double x = 0;
  double v = 0;
  fields >> sub >> x >> v;
  CHECK(sub == 2);
  CHECK(x == Catch::Approx(1.0 + 0.3 * std::sin(1.0)));
  CHECK(v == 0.0);
}

TEST_CASE("runs without wallclock are reproducible", "[harness]") {
  auto c = parse_config(R"({"geometry": {"dim": 1, "resolution": 16}, "time": {"steps": 8},
                           "evolution": {"kind": "axis_stretch", "a": [0.3]},
                           "outputs": {"wallclock": false}})");
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  run_experiment(c, a);
  run_experiment(c, b);
  CHECK(slurp(a / "history.csv") == slurp(b / "history.csv"));
}

TEST_CASE("zero source converges at sweep 0 with an empty history", "[harness]") {
  auto c = parse_config(R"({"source": {"kind": "zero"}, "geometry": {"resolution": 16}, "time": {"steps": 8}})");
  const auto dir = scratch("zero");
  const auto r = run_experiment(c, dir);
  CHECK(r.report.status == Status::converged);
  CHECK(r.report.iterations == 0);
  CHECK(slurp(dir / "history.csv") == "n,err_Z,err_L2,increment_Z,pairing,wallclock_ms\n");
}

TEST_CASE("Dirichlet-Neumann on the identity map", "[harness]") {
  auto c = parse_config(R"({"geometry": {"resolution": 16}, "time": {"steps": 16},
                           "method": {"name": "dirichlet_neumann", "s1": 0.5}})");
  const auto r = run_experiment(c, scratch("dn"));
  CHECK(r.report.status == Status::converged);
}

TEST_CASE("output directory override", "[harness]") {
  auto c = parse_config(R"({"outputs": {"dir": "somewhere"}})");
  CHECK(resolve_output_dir(c) == std::filesystem::path("somewhere"));
  setenv("EVODD_OUTPUT_DIR", "/tmp/elsewhere", 1);
  CHECK(resolve_output_dir(c) == std::filesystem::path("/tmp/elsewhere"));
  unsetenv("EVODD_OUTPUT_DIR");
}

TEST_CASE("mms study needs a manufactured source", "[harness][errors]") {
  auto c = parse_config(R"({"source": {"kind": "zero"}})");
  CHECK_THROWS_AS(mms_convergence_study(c, 3), Error);
}
