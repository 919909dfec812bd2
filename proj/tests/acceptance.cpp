// Copyright 2026 The curveops Authors
// SPDX-License-Identifier: Apache-2.0

// Runs the bundled scenarios and prints one line per criterion.
// usage: acceptance [report_dir]

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>

#include "curveops/harness.hpp"

using namespace curveops;
namespace fs = std::filesystem;

namespace {

struct Tally {
  int pass = 0, fail = 0, skip = 0;
  std::vector<std::string> where, failed, skipped;
};

}  // namespace

int main(int argc, char** argv) {
  fs::path out = argc > 1 ? fs::path(argv[1]) : fs::path("reports");
  fs::path dir = fs::path(CURVEOPS_SOURCE_DIR) / "scenarios";
  std::map<std::string, Tally> tally;
  int status = 0;
  for (const char* name : {"torus", "sphere", "genus2", "torus_closed_forms"}) {
    Scenario s;
    try {
      s = load_scenario((dir / (std::string(name) + ".json")).string());
    } catch (const std::exception& e) {
      std::cerr << name << ": " << e.what() << "\n";
      return 2;
    }
    s.out_json = (out / (s.name + ".json")).string();
    s.out_csv = (out / (s.name + ".csv")).string();
    auto t0 = std::chrono::steady_clock::now();
    Report r = run_scenario(s);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit_report(r, s.out_json, s.out_csv, s.out_tables);
    std::fprintf(stderr, "%-20s %3d pass %3d fail %3d skipped  %.1fs\n", s.name.c_str(), r.count("PASS"),
                 r.count("FAIL"), r.count("SKIPPED"), secs);
    for (const auto& c : r.checks) {
      auto& t = tally[c.suite];
      if (c.status == "PASS") ++t.pass;
      if (c.status == "FAIL") {
        ++t.fail;
        t.failed.push_back(s.name + ":" + c.name);
      }
      if (c.status == "SKIPPED") {
        ++t.skip;
        t.skipped.push_back(s.name + ":" + c.name + " (" + c.note + ")");
      }
      if (t.where.empty() || t.where.back() != s.name) t.where.push_back(s.name);
    }
  }
  for (const auto& suite : all_suites()) {
    auto it = tally.find(suite);
    if (it == tally.end()) {
      std::printf("%-8s SKIPPED  no checks ran\n", suite.c_str());
      continue;
    }
    const auto& t = it->second;
    const char* st = t.fail ? "FAIL" : t.pass ? "PASS" : "SKIPPED";
    if (t.fail) status = 1;
    std::string on;
    for (const auto& w : t.where) on += (on.empty() ? "" : ",") + w;
    std::printf("%-8s %-7s  %d passed, %d failed, %d skipped  [%s]\n", suite.c_str(), st, t.pass, t.fail, t.skip,
                on.c_str());
    for (const auto& f : t.failed) std::printf("           failed: %s\n", f.c_str());
    for (const auto& k : t.skipped) std::printf("           skipped: %s\n", k.c_str());
  }
  return status;
}
