// Copyright 2026 The curveops Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <random>

#include "curveops/charvar.hpp"
#include "curveops/surfaces.hpp"

using namespace curveops;
using Catch::Matchers::WithinAbs;

namespace {

Quat random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Quat q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q;
}

// random point of U near the middle
std::vector<double> random_tau(const DecoratedGraph& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.36, 0.62);
  auto t = leg_taus(g);
  do {
    for (int e : g.internal_edges) t[static_cast<std::size_t>(e)] = u(rng);
  } while (!in_U(t, g, 1e-3));
  return t;
}

std::vector<double> random_theta(const DecoratedGraph& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  std::vector<double> th(g.edges.size(), 0.0);
  for (int e : g.internal_edges) th[static_cast<std::size_t>(e)] = u(rng);
  return th;
}

}  // namespace

TEST_CASE("pants representation", "[charvar]") {
  for (auto [a, b, c] : {std::tuple{0.4, 0.4, 0.4}, {0.2, 0.5, 0.6}, {0.7, 0.6, 0.5}}) {
    auto P = pants_rep(a, b, c);
    CHECK_THAT(qtrace(P[0]), WithinAbs(2 * std::cos(kPi * a), 1e-14));
    CHECK_THAT(qtrace(P[1]), WithinAbs(2 * std::cos(kPi * b), 1e-14));
    CHECK_THAT(qtrace(P[2]), WithinAbs(2 * std::cos(kPi * c), 1e-14));
    Quat abc = P[0] * P[1] * P[2];
    CHECK((abc.coeffs() - Quat(1, 0, 0, 0).coeffs()).norm() < 1e-14);
  }
  CHECK_THROWS_AS(pants_rep(0.1, 0.1, 0.5), CharvarError);
  CHECK_THROWS_AS(pants_rep(0.9, 0.9, 0.9), CharvarError);
  CHECK_THROWS_AS(pants_rep(0.0, 0.5, 0.5), CharvarError);
}

TEST_CASE("trace identity on random words", "[charvar][property]") {
  std::mt19937_64 rng(5);
  std::vector<Quat> gens;
  for (int i = 0; i < 4; ++i) gens.push_back(random_unit(rng));
  for (int i = 0; i < 200; ++i) {
    Word x = random_word(rng, 4, 6), y = random_word(rng, 4, 6);
    double lhs = qtrace(eval_word(cat({x, y}), gens)) + qtrace(eval_word(cat({x, word_inverse(y)}), gens));
    double rhs = qtrace(eval_word(x, gens)) * qtrace(eval_word(y, gens));
    CHECK(std::fabs(lhs - rhs) <= 1e-12);
  }
}

TEST_CASE("word tangent vs finite differences", "[charvar]") {
  std::mt19937_64 rng(9);
  std::vector<Quat> gens, dirs;
  std::normal_distribution<double> n;
  for (int i = 0; i < 3; ++i) {
    gens.push_back(random_unit(rng));
    dirs.push_back(gens.back() * qpure(Vec3(n(rng), n(rng), n(rng))));
  }
  for (int i = 0; i < 30; ++i) {
    Word w = random_word(rng, 3, 8);
    double h = 1e-6;
    std::vector<Quat> p, m;
    for (std::size_t j = 0; j < gens.size(); ++j) {
      p.push_back(qadd(gens[j], qscale(h, dirs[j])));
      m.push_back(qadd(gens[j], qscale(-h, dirs[j])));
    }
    Quat fd = qscale(0.5 / h, qadd(eval_word(w, p), qscale(-1, eval_word(w, m))));
    Quat ex = eval_word_tangent(w, gens, dirs);
    CHECK((fd.coeffs() - ex.coeffs()).norm() < 1e-7);
  }
}

TEST_CASE("relations hold and the representation is irreducible", "[charvar][property]") {
  std::mt19937_64 rng(21);
  for (const char* n : {"torus", "sphere", "genus2"}) {
    auto g = builtin_surface(n);
    CharVariety cv(g, n);
    for (int i = 0; i < 10; ++i) {
      auto tau = random_tau(g, rng);
      auto gens = cv.rep(tau, random_theta(g, rng));
      CHECK(cv.relation_residual(gens) <= 1e-10);
      CHECK(cv.noncommutativity(gens) > 1e-3);
    }
  }
}

TEST_CASE("decomposition curves: f = -2cos(pi tau), no theta dependence", "[charvar]") {
  std::mt19937_64 rng(3);
  for (const char* n : {"torus", "sphere", "genus2"}) {
    auto g = builtin_surface(n);
    CharVariety cv(g, n);
    for (int i = 0; i < 5; ++i) {
      auto tau = random_tau(g, rng);
      auto gens = cv.rep(tau, random_theta(g, rng));
      for (int e : g.internal_edges) {
        auto w = curve_words(cv.model(), g, *make_decomp(g, e));
        REQUIRE(w.size() == 1);
        CHECK_THAT(trace_fn(w[0], gens), WithinAbs(-2 * std::cos(kPi * tau[static_cast<std::size_t>(e)]), 1e-12));
        CHECK_THAT(action_observable(cv, e)(tau, random_theta(g, rng)),
                   WithinAbs(tau[static_cast<std::size_t>(e)], 1e-10));
      }
    }
  }
}

TEST_CASE("theta derivative: exact tangent vs finite differences", "[charvar]") {
  std::mt19937_64 rng(17);
  for (const char* n : {"torus", "sphere", "genus2"}) {
    auto g = builtin_surface(n);
    CharVariety cv(g, n);
    int ng = static_cast<int>(cv.model().generators.size());
    for (int i = 0; i < 6; ++i) {
      auto tau = random_tau(g, rng);
      auto th = random_theta(g, rng);
      Word w = random_word(rng, ng, 6);
      for (int e : g.internal_edges) {
        auto p = th, m = th;
        p[static_cast<std::size_t>(e)] += 1e-5;
        m[static_cast<std::size_t>(e)] -= 1e-5;
        double fd = (trace_fn(w, cv.rep(tau, p)) - trace_fn(w, cv.rep(tau, m))) / 2e-5;
        CHECK(std::fabs(fd - trace_dtheta(cv, w, tau, th, e)) <= 1e-6);
      }
    }
  }
}

TEST_CASE("action coordinates: brackets", "[charvar][property]") {
  std::mt19937_64 rng(33);
  auto g = builtin_surface("genus2");
  CharVariety cv(g, "genus2");
  const auto& E = g.internal_edges;
  for (int i = 0; i < 4; ++i) {
    auto tau = random_tau(g, rng);
    auto th = random_theta(g, rng);
    for (int e : E)
      for (int f : E)
        CHECK(std::fabs(poisson_bracket(g, action_observable(cv, e), action_observable(cv, f), tau, th, 1e-5)) <=
              1e-8);
    Word w = random_word(rng, static_cast<int>(cv.model().generators.size()), 5);
    auto F = trace_observable(cv, w);
    for (int e : E) {
      double b = poisson_bracket(g, action_observable(cv, e), F, tau, th, 1e-5);
      CHECK(std::fabs(b - trace_dtheta(cv, w, tau, th, e)) <= 1e-6);
    }
  }
}

// a Dehn twist moves the angle by pi tau_e
TEST_CASE("twists act by angle translation", "[charvar]") {
  std::mt19937_64 rng(41);
  for (const char* n : {"torus", "sphere", "genus2"}) {
    auto g = builtin_surface(n);
    CharVariety cv(g, n);
    auto tau = random_tau(g, rng);
    auto th = random_theta(g, rng);
    for (int e : g.internal_edges) {
      auto ue = static_cast<std::size_t>(e);
      for (int m : {1, -1, 2}) {
        auto T = curve_words(cv.model(), g, *make_twist(g, e, m, make_dual(g, e)))[0];
        auto D = curve_words(cv.model(), g, *make_dual(g, e))[0];
        auto moved = th;
        moved[ue] += m * kPi * tau[ue];
        CHECK_THAT(trace_fn(T, cv.rep(tau, th)), WithinAbs(trace_fn(D, cv.rep(tau, moved)), 1e-11));
      }
    }
  }
}

TEST_CASE("origin shifts between characters", "[charvar]") {
  auto g = builtin_surface("genus2");
  auto chars = characters(g);
  for (const auto& a : chars)
    for (const auto& b : chars) {
      auto n = origin_shift(g, a, b);
      for (int i = 0; i < g.dim(); ++i) {
        int s = 0;
        for (int e : g.internal_edges)
          if (g.basis_cycles[static_cast<std::size_t>(i)] >> e & 1u) s += n[static_cast<std::size_t>(e)];
        RelH1Class c{std::uint64_t{1} << i};
        CHECK(s % 2 == (a.q(g, c) + b.q(g, c)) % 2);
      }
    }
  auto L = angle_lattice(g);
  CHECK(L.lambda.size() == 5);
  CHECK(L.lambda_prime.size() == 3);
}

TEST_CASE("outside U", "[charvar]") {
  auto g = builtin_surface("genus2");
  CharVariety cv(g, "genus2");
  CHECK_THROWS_AS(cv.rep({0.1, 0.1, 0.5}, {0, 0, 0}), CharvarError);
  CHECK_THROWS_AS(cv.rep({0.9, 0.9, 0.9}, {0, 0, 0}), CharvarError);
  CHECK_THROWS_AS(cv.model().parse_word("a q"), CharvarError);
}
