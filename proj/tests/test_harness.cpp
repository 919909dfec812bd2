// Copyright 2026 The curveops Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "curveops/harness.hpp"

using namespace curveops;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch() {
  auto d = fs::temp_directory_path() / ("curveops_harness_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_scenario(const std::string& name, const json& j) {
  auto p = scratch() / name;
  std::ofstream(p) << j.dump(2);
  return p;
}

int cli(const std::string& args) {
  std::string cmd = std::string(CURVEOPS_CLI) + " " + args + " > /dev/null 2>&1";
  int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

json small_torus() {
  return json::parse(R"({"name":"small","surface":"torus","seed":3,
    "suites":["V1","V3","V4","P-enum","P-sign","P-char","P-grad"],
    "levels":{"V1":[15,25],"V3":[15,25],"V4":[15,25],"P-enum":[5,15]}})");
}

}  // namespace

TEST_CASE("scenario validation", "[harness]") {
  auto bad = [](const char* text) { return parse_scenario(json::parse(text)); };
  CHECK_THROWS_AS(bad(R"({"surface":"torus","colour":1})"), ConfigError);
  CHECK_THROWS_AS(bad(R"({"name":"x"})"), ConfigError);
  CHECK_THROWS_AS(bad(R"({"surface":"klein"})"), ConfigError);
  CHECK_THROWS_AS(bad(R"({"surface":"torus","suites":["V9"]})"), ConfigError);
  CHECK_THROWS_AS(bad(R"({"surface":"torus","levels":{"V1":[16]}})"), ConfigError);  // 16/5 is no color
  CHECK_THROWS_AS(bad(R"({"surface":"torus","levels":{"V1":[1]}})"), ConfigError);
  CHECK_THROWS_AS(bad(R"({"surface":"torus","tau_grid":[[0.05]]})"), ConfigError);
  CHECK_THROWS_AS(bad(R"({"surface":"torus","tolerances":{"V1":-1}})"), ConfigError);
  CHECK_THROWS_AS(bad(R"({"surface":"torus","tolerances":{"V77":1}})"), ConfigError);
  CHECK_THROWS_AS(bad(R"x({"surface":"torus","curves":["D(q)"]})x"), ConfigError);
  CHECK_THROWS_AS(bad(R"({"surface":"torus","marked":[{"vertex":"p","color":5}],"tau_grid":[[0.4]]})"),
                  ConfigError);
  try {
    bad(R"({"surface":"torus","levels":{"V2":[20,"x"]}})");
    FAIL("accepted a bad level");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("scenario.levels.V2[1]") != std::string::npos);
  }
  auto p = scratch() / "broken.json";
  std::ofstream(p) << "{\"surface\": ";
  CHECK_THROWS_AS(load_scenario(p.string()), ConfigError);
  CHECK_THROWS_AS(load_scenario((scratch() / "missing.json").string()), ConfigError);
}

TEST_CASE("scenario hash ignores output paths", "[harness]") {
  auto a = small_torus(), b = small_torus();
  b["output"] = {{"json", "x.json"}};
  CHECK(parse_scenario(a).hash == parse_scenario(b).hash);
  b["seed"] = 4;
  CHECK(parse_scenario(a).hash != parse_scenario(b).hash);
}

TEST_CASE("small torus run passes and reports deterministically", "[harness]") {
  auto s = parse_scenario(small_torus());
  auto r1 = run_scenario(s), r2 = run_scenario(s);
  CHECK(r1.exit_code() == 0);
  CHECK(r1.count("FAIL") == 0);
  CHECK(r1.count("PASS") > 10);
  CHECK(report_json(r1).dump() == report_json(r2).dump());
  std::ostringstream c1, c2;
  report_csv(c1, r1);
  report_csv(c2, r2);
  CHECK(c1.str() == c2.str());
  // one row per check
  std::string rows = c1.str();
  CHECK(std::count(rows.begin(), rows.end(), '\n') == static_cast<long>(r1.checks.size()) + 1);
  auto j = report_json(r1);
  for (const char* k : {"inputs", "environment", "checks", "summary"}) CHECK(j.contains(k));
}

TEST_CASE("empty suite list gives a header-only CSV", "[harness]") {
  auto j = small_torus();
  j["suites"] = json::array();
  auto r = run_scenario(parse_scenario(j));
  CHECK(r.checks.empty());
  CHECK(r.exit_code() == 0);
  std::ostringstream os;
  report_csv(os, r);
  CHECK(os.str() == "suite,name,status,measured,expected,tolerance,comparison,note\n");
}

TEST_CASE("custom graph: character variety suites are skipped", "[harness]") {
  auto j = json::parse(R"({"suites":["V6","V8","P-rel","P-enum"],"levels":{"P-enum":[5]}})");
  j["surface"] = json::parse(surface_json("torus"));
  auto r = run_scenario(parse_scenario(j));
  CHECK(r.count("FAIL") == 0);
  CHECK(r.count("SKIPPED") >= 3);
  for (const auto& c : r.checks)
    if (c.status == "SKIPPED") CHECK_FALSE(c.note.empty());
}

TEST_CASE("cli exit codes", "[harness][cli]") {
  auto ok = write_scenario("ok.json", small_torus());
  auto failing = small_torus();
  failing["tolerances"] = {{"P-grad", 1e-15}};
  auto bad = write_scenario("fail.json", failing);
  auto out = scratch();
  CHECK(cli("run " + ok.string() + " --json " + (out / "ok_report.json").string()) == 0);
  CHECK(fs::exists(out / "ok_report.json"));
  CHECK(cli("run " + bad.string()) == 1);
  auto broken = scratch() / "broken_cli.json";
  std::ofstream(broken) << "[1,";
  CHECK(cli("run " + broken.string()) == 2);
  CHECK(cli("run " + (scratch() / "nope.json").string()) == 2);
  CHECK(cli("frobnicate") == 2);
  CHECK(cli("operator --surface torus --curve 'D(q)' --level 15 --out " + (out / "x.json").string()) == 2);
  CHECK(cli("operator --surface torus --curve 'D(e)' --level 15 --out " + (out / "op.json").string()) == 0);
  auto op = json::parse(slurp(out / "op.json"));
  CHECK(op["manifest"]["r"] == 15);
  CHECK(cli("symbol --surface torus --curve 'D(e)' --tau 0.4 --levels 105,135,165,225") == 0);
  CHECK(cli("charvar --surface genus2 --tau 0.4,0.4,0.4 --theta 0.1,0.2,0.3 --curve 'Z(e1,e2)'") == 0);
  CHECK(cli("charvar --surface genus2 --tau 0.1,0.1,0.5 --theta 0,0,0") == 2);
}

TEST_CASE("thread count does not change the report", "[harness][cli]") {
  auto j = small_torus();
  j["suites"] = {"V1", "V3", "V5"};
  j["levels"]["V5"] = {105, 135, 165, 225};
  auto p = write_scenario("threads.json", j);
  auto a = scratch() / "t1.json", b = scratch() / "t3.json";
  CHECK(cli("--threads 1 run " + p.string() + " --json " + a.string()) == 0);
  CHECK(cli("--threads 3 run " + p.string() + " --json " + b.string()) == 0);
  auto ja = json::parse(slurp(a)), jb = json::parse(slurp(b));
  CHECK(ja["checks"] == jb["checks"]);
  CHECK(ja["convergence"] == jb["convergence"]);
}
