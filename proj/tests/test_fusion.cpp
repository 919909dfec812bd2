// Copyright 2026 The curveops Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <sstream>

#include "curveops/fusion.hpp"
#include "curveops/surfaces.hpp"

using namespace curveops;
using Catch::Matchers::WithinAbs;

namespace {

Eigen::MatrixXcd dense(const SparseOperator& op) {
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(static_cast<long>(op.basis.size()), static_cast<long>(op.basis.size()));
  for (const auto& t : op.entries) M(t.target, t.source) += t.v;
  return M;
}

// Closed forms, typed out again here. Angles t = pi c / r, h = pi / r.
double W(double t, double a, double h) {
  return std::sqrt(std::sin(t + a / 2 + h / 2) * std::sin(t - a / 2 + h / 2) / (std::sin(t) * std::sin(t + h)));
}
long double S(long double x) { return std::sin(x); }
long double I(long double a, long double b, long double c, long double d, long double e, long double h) {
  long double v = 2 * std::cos(c + d - h) + 4 * S((a + d - e - h) / 2) * S((a - d + e + h) / 2) *
                                                S((b + c - e - h) / 2) * S((b - c + e + h) / 2) / (S(e) * S(e + h));
  if (e != h)  // 0/0 at c_e = 1, limit 0
    v += 4 * S((a + d + e - h) / 2) * S((-a + d + e - h) / 2) * S((b + c + e - h) / 2) * S((-b + c + e - h) / 2) /
         (S(e) * S(e - h));
  return v;
}
long double J(long double a, long double b, long double c, long double d, long double e, long double h) {
  long double p = S((a + d - e - h) / 2) * S((a - d + e + h) / 2) * S((b + c - e - h) / 2) * S((b - c + e + h) / 2) /
                  (S(e) * S(e + h));
  long double q = S((a + d + e + h) / 2) * S((-a + d + e + h) / 2) * S((b + c + e + h) / 2) *
                  S((-b + c + e + h) / 2) / (S(e + h) * S(e + 2 * h));
  return 4 * std::sqrt(std::max(p * q, 0.0L));
}

}  // namespace

TEST_CASE("decomposition curves: eigenvalue -(A^2c + A^-2c)", "[fusion]") {
  for (const char* n : {"torus", "genus2"}) {
    auto g = builtin_surface(n);
    for (int r : {5, 10, 15}) {
      if (std::string(n) == "torus" && r % 5) continue;
      Level L(r);
      for (int e : g.internal_edges) {
        auto op = assemble_operator(g, *make_decomp(g, e), r, 1);
        for (const auto& t : op.entries) {
          REQUIRE(t.source == t.target);
          int c = op.basis[t.source][e];
          cplx want = -(std::pow(L.A(), 2 * c) + std::pow(L.A(), -2 * c));
          CHECK(std::abs(t.v - want) < 1e-13);
        }
      }
    }
  }
}

TEST_CASE("loop dual vs W", "[fusion]") {
  auto g = builtin_surface("torus");
  int e = g.edge_index("e"), f = g.edge_index("f");
  auto D = make_dual(g, e);
  for (int r : {15, 45, 105}) {
    Level L(r);
    double h = kPi / r;
    for (const auto& c : enumerate_colorings(g, r)) {
      auto row = symbol_row(g, *D, c, L);
      for (const auto& t : row) {
        REQUIRE(std::abs(t.k[e]) == 1);
        double want = W(h * c[e], h * c[f], t.k[e] * h);
        CHECK(std::abs(t.v - want) <= 1e-12 * std::fabs(want));
      }
    }
  }
}

TEST_CASE("joining dual vs I and J", "[fusion]") {
  auto g = builtin_surface("sphere");
  int e = g.edge_index("e");
  int a = g.edge_index("a"), b = g.edge_index("b"), c_ = g.edge_index("c"), d = g.edge_index("d");
  auto D = make_dual(g, e);
  for (int r : {15, 45, 105}) {
    Level L(r);
    long double h = 3.141592653589793238462643383279502884L / r;
    for (const auto& c : enumerate_colorings(g, r)) {
      long double ta = h * c[a], tb = h * c[b], tc = h * c[c_], td = h * c[d], te = h * c[e];
      for (const auto& t : symbol_row(g, *D, c, L)) {
        long double want = t.k[e] == 0 ? -I(ta, tb, tc, td, te, h)
                           : t.k[e] == 2 ? J(ta, tb, tc, td, te, h)
                                         : J(ta, tb, tc, td, te - 2 * h, h);
        CHECK(std::abs(t.v - static_cast<double>(want)) <= 1e-11 * std::max(1e-4, std::fabs(static_cast<double>(want))));
      }
    }
  }
}

TEST_CASE("operators are Hermitian and bounded", "[fusion][property]") {
  auto g = builtin_surface("genus2");
  for (const char* id : {"D(e1)", "Z(e1,e2)", "tw(e2,1,D(e2))", "tw(e2,-1,Z(e1,e2))", "U(C(e1),D(e2))"}) {
    auto c = parse_curve(g, id);
    for (int r : {7, 12}) {
      auto op = assemble_operator(g, *c, r, 1);
      CHECK(hermiticity_error(op) < 1e-13);
      double bound = std::ldexp(1.0, component_count(*c));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense(op));
      CHECK(es.eigenvalues().cwiseAbs().maxCoeff() <= bound * (1 + 1e-12));
      CHECK(norm_estimate(op) == Catch::Approx(es.eigenvalues().cwiseAbs().maxCoeff()).epsilon(1e-9));
    }
  }
}

TEST_CASE("disjoint curves commute, products compose", "[fusion][property]") {
  auto g = builtin_surface("genus2");
  int r = 11;
  auto C1 = dense(assemble_operator(g, *parse_curve(g, "C(e1)"), r, 1));
  auto D2 = dense(assemble_operator(g, *parse_curve(g, "D(e2)"), r, 1));
  auto Z12 = dense(assemble_operator(g, *parse_curve(g, "Z(e1,e2)"), r, 1));
  auto U = dense(assemble_operator(g, *parse_curve(g, "U(C(e1),D(e2))"), r, 1));
  CHECK((C1 * D2 - D2 * C1).norm() < 1e-12);
  CHECK((U - C1 * D2).norm() < 1e-12);
  auto P = dense(assemble_operator(g, *parse_curve(g, "D(e2)*Z(e1,e2)"), r, 1));
  CHECK((P - D2 * Z12).norm() < 1e-11);
  auto C2 = dense(assemble_operator(g, *parse_curve(g, "C(e2)"), r, 1));
  auto C2sq = dense(assemble_operator(g, *parse_curve(g, "C(e2)^2"), r, 1));
  CHECK((C2sq - C2 * C2).norm() < 1e-12);
  // crossing curves do not commute
  CHECK((C2 * D2 - D2 * C2).norm() > 1e-3);
}

TEST_CASE("twists compose and conjugate by the twist phase", "[fusion][property]") {
  auto g = builtin_surface("torus");
  int r = 25;
  Level L(r);
  auto a = assemble_operator(g, *parse_curve(g, "tw(e,1,tw(e,1,D(e)))"), r, 1);
  auto b = assemble_operator(g, *parse_curve(g, "tw(e,2,D(e))"), r, 1);
  CHECK((dense(a) - dense(b)).norm() < 1e-12);
  // T = diag(mu_c), mu_c = (-1)^(c-1) A^(c^2-1)
  auto D = dense(assemble_operator(g, *parse_curve(g, "D(e)"), r, 1));
  auto basis = enumerate_colorings(g, r);
  Eigen::VectorXcd mu(static_cast<long>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    int c = basis[i][0];
    mu(static_cast<long>(i)) = ((c - 1) % 2 ? -1.0 : 1.0) * std::pow(L.A(), c * c - 1);
  }
  Eigen::MatrixXcd want = mu.asDiagonal() * D * mu.conjugate().asDiagonal();
  auto tw = dense(assemble_operator(g, *parse_curve(g, "tw(e,1,D(e))"), r, 1));
  CHECK((tw - want).norm() < 1e-11);
}

TEST_CASE("assembly is independent of thread count", "[fusion]") {
  auto g = builtin_surface("genus2");
  auto c = parse_curve(g, "tw(e2,1,Z(e1,e2))");
  auto a = assemble_operator(g, *c, 20, 1);
  auto b = assemble_operator(g, *c, 20, 3);
  REQUIRE(a.entries.size() == b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    CHECK(a.entries[i].source == b.entries[i].source);
    CHECK(a.entries[i].target == b.entries[i].target);
    CHECK(a.entries[i].v == b.entries[i].v);
  }
}

TEST_CASE("operator export", "[fusion]") {
  auto g = builtin_surface("torus");
  auto op = assemble_operator(g, *parse_curve(g, "D(e)"), 15, 1);
  auto j = operator_json(g, op);
  CHECK(j["manifest"]["r"] == 15);
  CHECK(j["manifest"]["curve"] == "D(e)");
  CHECK(j["manifest"]["dimension"] == op.basis.size());
  CHECK(j["triplets"].size() == op.entries.size());
  std::ostringstream os;
  write_operator_csv(os, op);
  std::string s = os.str();
  CHECK(s.rfind("c_index,k,re,im\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == static_cast<long>(op.entries.size()) + 1);
}
