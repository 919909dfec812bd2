// Copyright 2026 The curveops Authors
// SPDX-License-Identifier: Apache-2.0
//
// curveops command line: scenario runner and single-object queries.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "curveops/harness.hpp"

using namespace curveops;

namespace {

DecoratedGraph load_surface(const std::string& s) {
  if (s == "torus" || s == "sphere" || s == "genus2") return builtin_surface(s);
  std::ifstream in(s);
  if (!in) throw ConfigError("--surface: '" + s + "' is neither a builtin surface nor a readable file");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(s + ": malformed JSON: " + e.what());
  }
  return build_graph(j);
}

std::vector<double> edge_values(const DecoratedGraph& g, const std::vector<double>& v, const char* flag, bool with_legs) {
  if (v.size() != g.internal_edges.size())
    throw ConfigError(std::string(flag) + ": expected " + std::to_string(g.internal_edges.size()) +
                      " comma-separated values, one per internal edge");
  std::vector<double> out = with_legs ? leg_taus(g) : std::vector<double>(g.edges.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(g.internal_edges[i])] = v[i];
  return out;
}

void set_threads(int n) {
  if (n > 0) setenv("CURVEOPS_THREADS", std::to_string(n).c_str(), 1);
}

int cmd_run(const std::string& path, const std::string& json, const std::string& csv, const std::string& tables,
            std::optional<std::uint64_t> seed, bool quiet) {
  Scenario s = load_scenario(path);
  if (seed) s.seed = *seed;
  if (!json.empty()) s.out_json = json;
  if (!csv.empty()) s.out_csv = csv;
  if (!tables.empty()) s.out_tables = tables;
  Report r = run_scenario(s);
  if (!quiet)
    for (const auto& c : r.checks) std::cout << format_check(c) << "\n";
  std::cout << r.scenario << ": " << r.count("PASS") << " passed, " << r.count("FAIL") << " failed, "
            << r.count("SKIPPED") << " skipped\n";
  emit_report(r, s.out_json, s.out_csv, s.out_tables);
  return r.exit_code();
}

int cmd_operator(const std::string& surface, const std::string& curve, int r, const std::string& out,
                 const std::string& csv) {
  auto g = load_surface(surface);
  for (const auto& m : g.marked) (void)m.color_at(r);
  auto c = parse_curve(g, curve);
  auto op = assemble_operator(g, *c, r);
  write_text(out, operator_json(g, op).dump(1) + "\n");
  if (!csv.empty()) {
    std::ostringstream os;
    write_operator_csv(os, op);
    write_text(csv, os.str());
  }
  std::cout << operator_manifest(g, op).dump() << "\n";
  return 0;
}

int cmd_symbol(const std::string& surface, const std::string& curve, const std::vector<double>& tau,
               const std::vector<int>& levels, int degree, const std::string& out) {
  auto g = load_surface(surface);
  for (int r : levels)
    for (const auto& m : g.marked) (void)m.color_at(r);
  auto t = edge_values(g, tau, "--tau", true);
  if (!in_U(t, g, 1e-9)) throw ConfigError("--tau: point is outside U");
  auto c = parse_curve(g, curve);
  auto fit = extrapolate(g, *c, t, levels, degree, true);
  auto j = fit_report_json(g, fit);
  if (!out.empty()) write_text(out, j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_charvar(const std::string& surface, const std::vector<double>& tau, const std::vector<double>& theta,
                const std::vector<std::string>& curves, int character) {
  if (surface != "torus" && surface != "sphere" && surface != "genus2")
    throw CapabilityError("charvar: no character-variety model for custom graphs");
  auto g = builtin_surface(surface);
  CharVariety cv(g, surface);
  auto t = edge_values(g, tau, "--tau", true);
  auto th = edge_values(g, theta, "--theta", false);
  if (!in_U(t, g, 1e-6)) throw ConfigError("--tau: outside U or within 1e-6 of its boundary");
  auto chars = characters(g);
  if (character < 0 || character >= static_cast<int>(chars.size()))
    throw ConfigError("--character: expected 0.." + std::to_string(chars.size() - 1));
  auto n = origin_shift(g, chars[0], chars[static_cast<std::size_t>(character)]);
  std::vector<double> sh(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) sh[i] = kPi * n[i];
  auto gens = cv.rep(t, th, sh);
  nlohmann::json j;
  j["surface"] = surface;
  j["character"] = character;
  j["representation"] = rep_json(cv.model(), gens);
  j["relation_residual"] = cv.relation_residual(gens);
  nlohmann::json tr = nlohmann::json::object();
  for (const auto& id : curves) {
    auto c = parse_curve(g, id);
    tr[id] = cv.observable(curve_words(cv.model(), g, *c), gens);
  }
  j["traces"] = tr;
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curveops: curve operators on skein modules at roots of unity"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: CURVEOPS_THREADS or hardware)");

  auto* run = app.add_subcommand("run", "run a scenario file");
  std::string scen, json, csv, tables;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  run->add_option("scenario", scen, "scenario JSON")->required();
  run->add_option("--json", json, "JSON report path");
  run->add_option("--csv", csv, "CSV report path");
  run->add_option("--tables", tables, "directory for convergence tables");
  run->add_option("--seed", seed, "override the scenario seed");
  run->add_flag("--quiet", quiet, "summary line only");

  std::string surface, curve, out, ocsv;
  int level = 0, degree = -1, character = 0;
  std::vector<double> tau, theta;
  std::vector<int> levels;
  std::vector<std::string> curves;

  auto* op = app.add_subcommand("operator", "assemble the operator of a curve at one level");
  op->add_option("--surface", surface, "torus, sphere, genus2 or a graph JSON file")->required();
  op->add_option("--curve", curve, "curve id, e.g. D(e) or tw(e,1,D(e))")->required();
  op->add_option("--level", level, "level r")->required()->check(CLI::Range(2, 100000));
  op->add_option("--out", out, "operator JSON")->required();
  op->add_option("--csv", ocsv, "triplet CSV");

  auto* sym = app.add_subcommand("symbol", "fit the symbol expansion of a curve");
  sym->add_option("--surface", surface, "torus, sphere, genus2 or a graph JSON file")->required();
  sym->add_option("--curve", curve, "curve id")->required();
  sym->add_option("--tau", tau, "tau per internal edge")->required()->delimiter(',');
  sym->add_option("--levels", levels, "levels r")->required()->delimiter(',');
  sym->add_option("--degree", degree, "polynomial degree in 1/r (default by level count)");
  sym->add_option("--out", out, "fit report JSON");

  auto* chv = app.add_subcommand("charvar", "evaluate the representation and trace functions");
  chv->add_option("--surface", surface, "torus, sphere or genus2")->required();
  chv->add_option("--tau", tau, "tau per internal edge")->required()->delimiter(',');
  chv->add_option("--theta", theta, "theta per internal edge")->required()->delimiter(',');
  chv->add_option("--curve", curves, "curves whose trace functions are printed");
  chv->add_option("--character", character, "character index");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  set_threads(threads);
  try {
    if (*run) return cmd_run(scen, json, csv, tables, seed, quiet);
    if (*op) return cmd_operator(surface, curve, level, out, ocsv);
    if (*sym) return cmd_symbol(surface, curve, tau, levels, degree, out);
    if (*chv) return cmd_charvar(surface, tau, theta, curves, character);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const GraphError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const CurveError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const CapabilityError& e) {
    std::cout << "SKIPPED  " << e.what() << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
