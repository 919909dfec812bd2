// Copyright 2026 The curveops Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cstdlib>

#include "curveops/surfaces.hpp"
#include "curveops/symbol.hpp"

using namespace curveops;
using Catch::Matchers::WithinAbs;

namespace {
std::vector<int> odd15(std::initializer_list<int> ms) {
  std::vector<int> v;
  for (int m : ms) v.push_back(15 * m);
  return v;
}
}  // namespace

TEST_CASE("polynomial fit recovers 1 + h + h^2 data", "[symbol]") {
  std::vector<double> h;
  std::vector<cplx> y;
  for (int r : {100, 150, 230, 400, 800}) {
    double x = 1.0 / r;
    h.push_back(x);
    y.push_back(cplx(1.0, -0.5) + cplx(2.0, 1.0) * x + cplx(-3.0, 0.25) * x * x);
  }
  auto f = fit_poly(h, y, 2);
  CHECK(std::abs(f.coef[0] - cplx(1.0, -0.5)) < 1e-12);
  CHECK(std::abs(f.coef[1] - cplx(2.0, 1.0)) < 1e-9);
  CHECK(std::abs(f.coef[2] - cplx(-3.0, 0.25)) < 1e-6);
  CHECK(f.rms < 1e-14);
  // a linear model leaves an O(h^2) residual
  CHECK(fit_poly(h, y, 1).rms > 1e-6);
  CHECK_THROWS_AS(fit_poly({0.01, 0.02}, {1.0, 2.0}, 2), SymbolError);
}

TEST_CASE("log-log slope", "[symbol]") {
  std::vector<double> x{0.01, 0.005, 0.002, 0.001}, y;
  for (double v : x) y.push_back(5 * v * v);
  CHECK_THAT(loglog_slope(x, y), WithinAbs(2.0, 1e-12));
  CHECK(std::isnan(loglog_slope({0.1}, {1.0})));
}

TEST_CASE("anchor coloring", "[symbol]") {
  auto g = builtin_surface("torus");
  int e = g.edge_index("e");
  auto tau = leg_taus(g);
  tau[e] = 4.0 / 15;
  CHECK(anchor_coloring(g, tau, 105)[e] == 28);
  tau[e] = 0.3;  // 31.5: tie goes down
  CHECK(anchor_coloring(g, tau, 105)[e] == 31);
  auto s = builtin_surface("sphere");
  auto ts = leg_taus(s);
  ts[s.edge_index("e")] = 0.5;  // 52.5 at r=105, colors must be odd here
  int c = anchor_coloring(s, ts, 105)[s.edge_index("e")];
  CHECK(c % 2 == 1);
  CHECK(std::abs(c - 52.5) <= 2);
  CHECK(is_admissible(anchor_coloring(s, ts, 105), s, 105));
}

TEST_CASE("decomposition curve symbol is -2cos(pi tau)", "[symbol]") {
  auto g = builtin_surface("torus");
  int e = g.edge_index("e");
  auto tau = leg_taus(g);
  tau[e] = 0.3;  // off the level grid, exercises transport
  auto lv = odd15({7, 9, 11, 15, 21, 27, 35});
  auto fit = extrapolate(g, *make_decomp(g, e), tau, lv, 3, true);
  REQUIRE(fit.terms.size() == 1);
  CHECK(fit.drift > 0);
  CHECK(std::abs(fit.terms[0].F0 - (-2 * std::cos(kPi * 0.3))) < 1e-7);
  CHECK(std::abs(fit.terms[0].F1) < 1e-4);
  // on the grid nothing is transported and the data is exact at every level
  tau[e] = 4.0 / 15;
  auto on = extrapolate(g, *make_decomp(g, e), tau, lv, 3, true);
  CHECK(on.drift == 0.0);
  CHECK(std::abs(on.terms[0].F0 - (-2 * std::cos(kPi * 4 / 15))) < 1e-13);
  CHECK(l1(default_term(on)) < 1e-10);
}

// h -> 0 limit of W: sqrt(sin(t + a/2) sin(t - a/2)) / sin(t)
TEST_CASE("loop dual principal symbol", "[symbol]") {
  auto g = builtin_surface("torus");
  int e = g.edge_index("e");
  // off the grid the anchor drift jumps between levels, which caps the fit near 1e-5
  for (auto [te, tol] : {std::pair{4.0 / 15, 1e-7}, {7.0 / 15, 1e-7}, {0.3, 1e-6}, {0.55, 1e-4}}) {
    auto tau = leg_taus(g);
    tau[e] = te;
    auto fit = extrapolate(g, *make_dual(g, e), tau, odd15({7, 9, 11, 15, 21, 27, 35}), 3);
    double t = kPi * te, a = kPi / 5;
    double want = std::sqrt(std::sin(t + a / 2) * std::sin(t - a / 2)) / std::sin(t);
    REQUIRE(fit.terms.size() == 2);
    for (const auto& term : fit.terms) CHECK(std::abs(term.F0 - want) < tol);
  }
}

TEST_CASE("first-order term matches the tau-derivative prediction", "[symbol]") {
  auto g = builtin_surface("sphere");
  int e = g.edge_index("e");
  auto tau = leg_taus(g);
  tau[e] = 7.0 / 15;
  auto lv = odd15({7, 9, 11, 15, 21, 27, 35, 45, 59, 75, 105});
  auto fit = extrapolate(g, *make_dual(g, e), tau, lv, 3, true);
  auto res = first_order_residuals(fit, fit.delta());
  std::vector<double> h;
  for (int r : lv) h.push_back(1.0 / r);
  CHECK_THAT(loglog_slope(h, res), WithinAbs(2.0, 0.3));
  for (const auto& t : fit.terms) CHECK(std::abs(t.F1 - t.delta0) < 5 * (t.F1_spread + t.delta_spread) + 1e-9);
}

TEST_CASE("composite: bracket constant", "[symbol]") {
  auto g = builtin_surface("torus");
  auto tau = leg_taus(g);
  tau[g.edge_index("e")] = 6.0 / 15;
  auto f = composite_fit(g, parse_curve(g, "C(e)"), parse_curve(g, "D(e)"), tau, odd15({7, 11, 15, 21, 27, 35, 45}));
  CHECK_THAT(f.K, WithinAbs(1.0, 0.01));
  CHECK_THAT(f.slope, WithinAbs(2.0, 0.3));
  // two decomposition curves: no bracket
  auto c = composite_fit(g, parse_curve(g, "C(e)"), parse_curve(g, "C(e)"), tau, odd15({7, 11, 15}));
  CHECK(c.bracket_size == 0.0);
}

TEST_CASE("convolution and subtraction", "[symbol]") {
  Fourier a{{{1, 0}, 2.0}, {{-1, 0}, 1.0}}, b{{{1, 0}, cplx(0, 1)}};
  auto c = convolve(a, b);
  CHECK(c.size() == 2);
  CHECK(c[{2, 0}] == cplx(0, 2));
  CHECK(c[{0, 0}] == cplx(0, 1));
  auto d = fsub(a, a);
  CHECK(l1(d) == 0.0);
  CHECK(evaluate(a, {0.0, 0.0}) == cplx(3.0));
}

TEST_CASE("level sampling does not depend on the thread count", "[symbol]") {
  auto g = builtin_surface("genus2");
  std::vector<double> tau{7.0 / 15, 6.0 / 15, 6.0 / 15};
  auto D = parse_curve(g, "Z(e1,e2)");
  auto lv = odd15({7, 9, 11, 15});
  setenv("CURVEOPS_THREADS", "1", 1);
  auto a = sample_levels(g, *D, tau, lv, true);
  setenv("CURVEOPS_THREADS", "4", 1);
  auto b = sample_levels(g, *D, tau, lv, true);
  unsetenv("CURVEOPS_THREADS");
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].F == b[i].F);
    CHECK(a[i].delta == b[i].delta);
  }
}

TEST_CASE("fit report", "[symbol]") {
  auto g = builtin_surface("torus");
  auto tau = leg_taus(g);
  tau[0] = 6.0 / 15;
  auto fit = extrapolate(g, *parse_curve(g, "D(e)"), tau, odd15({7, 9, 11, 15}));
  auto j = fit_report_json(g, fit);
  CHECK(j.contains("curve"));
  CHECK(j.dump() == fit_report_json(g, fit).dump());
  CHECK_THROWS_AS(extrapolate(g, *parse_curve(g, "D(e)"), tau, {105, 135}), SymbolError);
}
