// Copyright 2026 The curveops Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include "curveops/coloring.hpp"
#include "curveops/graph.hpp"
#include "curveops/surfaces.hpp"

using namespace curveops;

TEST_CASE("builtin surfaces: topology", "[graph]") {
  auto t = builtin_surface("torus");
  CHECK(t.genus == 1);
  CHECK(t.n_marked == 1);
  CHECK(t.internal_edges.size() == 1);
  CHECK(t.edges[0].kind == EdgeKind::Loop);
  CHECK(t.edges[1].kind == EdgeKind::Leg);

  auto s = builtin_surface("sphere");
  CHECK(s.genus == 0);
  CHECK(s.n_marked == 4);
  CHECK(s.dim() == 0);

  auto g = builtin_surface("genus2");
  CHECK(g.genus == 2);
  CHECK(g.internal_edges.size() == 3);
  CHECK(g.dim() == 2);
  CHECK_THROWS_AS(builtin_surface("klein"), GraphError);
}

// A thickened internal graph with V - E = -1 and one boundary circle is a one-holed torus, whose
// mod-2 form is the hyperbolic plane. The one-loop ribbon graph with two boundary circles is an
// annulus, whose form vanishes.
TEST_CASE("intersection form from the thickened surface", "[graph]") {
  auto g = builtin_surface("genus2");
  REQUIRE(g.ribbon_boundaries == 1);
  CHECK(g.form == std::vector<std::vector<int>>{{0, 1}, {1, 0}});
  auto t = builtin_surface("torus");
  REQUIRE(t.ribbon_boundaries == 2);
  CHECK(t.form == std::vector<std::vector<int>>{{0}});
}

TEST_CASE("form agrees with cycle intersections", "[graph][property]") {
  auto g = builtin_surface("genus2");
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j) {
      CHECK(g.form[i][j] == g.form[j][i]);
      CHECK(g.form[i][j] == g.intersection_mod2(g.basis_cycles[i], g.basis_cycles[j]));
    }
  for (std::uint64_t x = 0; x < 4; ++x) {
    CHECK(g.class_of_cycle(g.cycle_of_class({x})) == RelH1Class{x});
    CHECK(g.pairing({x}, {x}) == 0);
  }
}

TEST_CASE("twisted group algebra is associative", "[graph][property]") {
  auto g = builtin_surface("genus2");
  for (std::uint64_t x = 0; x < 4; ++x)
    for (std::uint64_t y = 0; y < 4; ++y)
      for (std::uint64_t z = 0; z < 4; ++z) {
        auto X = AlgebraElement::basis({x}), Y = AlgebraElement::basis({y}), Z = AlgebraElement::basis({z});
        auto l = algebra_mul(g, algebra_mul(g, X, Y), Z);
        auto r = algebra_mul(g, X, algebra_mul(g, Y, Z));
        REQUIRE(l.terms.size() == 1);
        CHECK(l.terms.begin()->first == r.terms.begin()->first);
        CHECK(l.terms.begin()->second == r.terms.begin()->second);
      }
}

TEST_CASE("characters are quadratic refinements and multiplicative", "[graph][property]") {
  auto g = builtin_surface("genus2");
  auto chars = characters(g);
  CHECK(chars.size() == 4);
  for (const auto& chi : chars)
    for (std::uint64_t x = 0; x < 4; ++x)
      for (std::uint64_t y = 0; y < 4; ++y) {
        CHECK(chi.q(g, RelH1Class{x} + RelH1Class{y}) == (chi.q(g, {x}) + chi.q(g, {y}) + g.pairing({x}, {y})) % 2);
        auto xy = algebra_mul(g, AlgebraElement::basis({x}), AlgebraElement::basis({y}));
        CHECK(chi.apply(g, xy) == std::complex<double>(chi.value(g, {x}) * chi.value(g, {y})));
      }
}

TEST_CASE("canonical JSON round trip and hash", "[graph]") {
  for (const char* n : {"torus", "sphere", "genus2"}) {
    auto g = builtin_surface(n);
    auto h = build_graph(g.to_json());
    CHECK(h.hash() == g.hash());
    CHECK(h.to_json() == g.to_json());
  }
  CHECK(builtin_surface("torus").hash() != builtin_surface("genus2").hash());
}

TEST_CASE("malformed graphs are rejected", "[graph]") {
  CHECK_THROWS_AS(build_graph(std::string("{not json")), GraphError);
  CHECK_THROWS_AS(build_graph(std::string(R"({"vertices":[]})")), GraphError);
  // vertex of valence two
  CHECK_THROWS_AS(build_graph(std::string(R"({"vertices":[{"id":"v","kind":"internal","cyclic":["a","b"]}],
    "edges":[{"id":"e","ends":["a","b"]}]})")),
                  GraphError);
  // dangling edge-end
  CHECK_THROWS_AS(build_graph(std::string(R"({"vertices":[
      {"id":"v","kind":"internal","cyclic":["e0","e1","f0"]},{"id":"p","kind":"boundary","cyclic":["f1"]}],
    "edges":[{"id":"e","ends":["e0","x"]},{"id":"f","ends":["f0","f1"]}],
    "marked":[{"vertex":"p","color_fraction":"1/5"}]})")),
                  GraphError);
  // unmarked boundary
  CHECK_THROWS_AS(build_graph(std::string(R"({"vertices":[
      {"id":"v","kind":"internal","cyclic":["e0","e1","f0"]},{"id":"p","kind":"boundary","cyclic":["f1"]}],
    "edges":[{"id":"e","ends":["e0","e1"]},{"id":"f","ends":["f0","f1"]}]})")),
                  GraphError);
  // bad fraction
  CHECK_THROWS_AS(build_graph(std::string(R"({"vertices":[
      {"id":"v","kind":"internal","cyclic":["e0","e1","f0"]},{"id":"p","kind":"boundary","cyclic":["f1"]}],
    "edges":[{"id":"e","ends":["e0","e1"]},{"id":"f","ends":["f0","f1"]}],
    "marked":[{"vertex":"p","color_fraction":"7/5"}]})")),
                  GraphError);
}

TEST_CASE("marked colors at a level", "[graph]") {
  auto t = builtin_surface("torus");
  CHECK(t.marked[0].color_at(15) == 3);
  CHECK_THROWS_AS(t.marked[0].color_at(16), GraphError);
}

TEST_CASE("enumeration vs brute force", "[coloring][property]") {
  for (const char* n : {"torus", "sphere", "genus2"}) {
    auto g = builtin_surface(n);
    for (int r = 3; r <= 8; ++r) {
      bool ok = true;
      for (const auto& m : g.marked) ok &= (r * m.num) % m.den == 0;
      if (!ok) continue;
      std::vector<Coloring> brute;
      Coloring c = leg_colors(g, r);
      const auto& E = g.internal_edges;
      std::vector<int> x(E.size(), 1);
      while (true) {
        for (std::size_t i = 0; i < E.size(); ++i) c[E[i]] = x[i];
        // admissibility written out at each internal vertex
        bool adm = true;
        for (const auto& v : g.vertices) {
          if (v.boundary) continue;
          int a = c[g.halfedges[v.cyclic[0]].edge], b = c[g.halfedges[v.cyclic[1]].edge],
              d = c[g.halfedges[v.cyclic[2]].edge];
          adm &= (a + b + d) % 2 == 1 && a < b + d && b < a + d && d < a + b && a + b + d < 2 * r;
        }
        if (adm) brute.push_back(c);
        std::size_t i = E.size();
        while (i > 0 && ++x[i - 1] == r) x[--i] = 1;
        if (i == 0) break;
      }
      auto fast = enumerate_colorings(g, r);
      std::sort(brute.begin(), brute.end());
      std::sort(fast.begin(), fast.end());
      CHECK(fast == brute);
      ColoringIndex idx(g, r, fast);
      for (std::size_t k = 0; k < fast.size(); ++k) CHECK(idx.find(fast[k]) == static_cast<int>(k));
    }
  }
}

TEST_CASE("tau region U", "[coloring]") {
  auto g = builtin_surface("genus2");
  CHECK(in_U({0.4, 0.4, 0.4}, g));
  CHECK_FALSE(in_U({0.1, 0.1, 0.5}, g));  // triangle inequality fails
  CHECK_FALSE(in_U({0.9, 0.9, 0.9}, g));  // sum exceeds 2
  auto s = builtin_surface("sphere");
  auto t = leg_taus(s);
  CHECK(t[s.edge_index("a")] == Catch::Approx(0.4));
}
