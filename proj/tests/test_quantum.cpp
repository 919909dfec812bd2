// Copyright 2026 The curveops Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "curveops/quantum.hpp"

using namespace curveops;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Plain products, no logs. Only usable at small r.
struct Naive {
  int r;
  double qint(int n) const { return std::sin(kPi * n / r) / std::sin(kPi / r); }
  double qfact(int n) const {
    double p = 1;
    for (int i = 1; i <= n; ++i) p *= qint(i);
    return p;
  }
  double theta(int a, int b, int c) const {
    int i = (b + c - a) / 2, j = (a + c - b) / 2, k = (a + b - c) / 2;
    double v = qfact(i + j + k + 1) * qfact(i) * qfact(j) * qfact(k) / (qfact(i + j) * qfact(j + k) * qfact(i + k));
    return (i + j + k) % 2 ? -v : v;
  }
  double tet(int A, int B, int E, int C, int D, int F) const {
    int a[4] = {(A + D + E) / 2, (B + C + E) / 2, (A + B + F) / 2, (C + D + F) / 2};
    int b[3] = {(B + D + E + F) / 2, (A + C + E + F) / 2, (A + B + C + D) / 2};
    double pre = 1;
    for (int bj : b)
      for (int ai : a) pre *= qfact(bj - ai);
    for (int x : {A, B, C, D, E, F}) pre /= qfact(x);
    int lo = std::max({a[0], a[1], a[2], a[3]}), hi = std::min({b[0], b[1], b[2]});
    double s = 0;
    for (int k = lo; k <= hi; ++k) {
      double t = qfact(k + 1);
      for (int ai : a) t /= qfact(k - ai);
      for (int bj : b) t /= qfact(bj - k);
      s += k % 2 ? -t : t;
    }
    return pre * s;
  }
};

bool adm(int a, int b, int c, int r) {
  return (a + b + c) % 2 == 0 && a <= b + c && b <= a + c && c <= a + b && a + b + c <= 2 * (r - 2);
}

}  // namespace

TEST_CASE("level tables", "[quantum]") {
  Level L(7);
  CHECK(L.r() == 7);
  CHECK(L.qsin(0) == 0.0);
  CHECK(L.qsin(7) == 0.0);
  CHECK_THAT(L.qsin(2), WithinAbs(std::sin(2 * kPi / 7), 1e-16));
  CHECK_THAT(L.hbar(), WithinAbs(1.0 / 7, 1e-18));
  cplx A = L.A();
  CHECK_THAT(A.real(), WithinAbs(-std::cos(kPi / 14), 1e-15));
  CHECK_THAT(A.imag(), WithinAbs(-std::sin(kPi / 14), 1e-15));
  CHECK(L.qfactorial(7) == 0.0);
  CHECK_THROWS(Level(1));
}

TEST_CASE("quantum factorial: log table vs direct product", "[quantum]") {
  for (int r : {5, 11, 40, 200}) {
    Level L(r);
    for (int n = 0; n < r; ++n) {
      double p = 1;
      for (int i = 1; i <= n; ++i) p *= std::sin(kPi * i / r);
      CHECK_THAT(L.qfactorial(n), WithinRel(p, 1e-12));
      if (n > 0) CHECK_THAT(L.log_qfactorial(n).value(), WithinRel(p, 1e-12));
    }
  }
}

TEST_CASE("A powers reduce exactly", "[quantum]") {
  Level L(9);
  cplx A = L.A(), p = 1.0;
  for (long e = 0; e < 80; ++e) {
    CHECK(std::abs(L.Apow(e) - p) < 1e-13);
    CHECK(std::abs(L.Apow(e + 36) - L.Apow(e)) < 1e-15);
    CHECK(std::abs(L.Apow(-e) * p - 1.0) < 1e-13);
    p *= A;
  }
}

TEST_CASE("Kauffman-Lins theta and tet vs plain products", "[quantum]") {
  for (int r : {6, 9, 13}) {
    Level L(r);
    Naive N{r};
    int M = r - 2;
    for (int a = 0; a <= M; ++a)
      for (int b = 0; b <= M; ++b)
        for (int c = 0; c <= M; ++c) {
          if (!adm(a, b, c, r)) continue;
          CHECK_THAT(L.kl_theta(a, b, c).value(), WithinRel(N.theta(a, b, c), 1e-11));
        }
    std::mt19937 rng(r);
    std::uniform_int_distribution<int> col(0, M);
    int done = 0;
    while (done < 300) {
      int A = col(rng), B = col(rng), C = col(rng), D = col(rng), E = col(rng), F = col(rng);
      if (!adm(A, D, E, r) || !adm(B, C, E, r) || !adm(A, B, F, r) || !adm(C, D, F, r)) continue;
      ++done;
      double want = N.tet(A, B, E, C, D, F);
      double got = L.kl_tet(A, B, E, C, D, F).value();
      CHECK_THAT(got, WithinAbs(want, 1e-11 * std::max(1.0, std::fabs(want))));
      // (A,B) <-> (C,D) leaves the face set unchanged
      CHECK_THAT(L.kl_tet(C, D, E, A, B, F).value(), WithinAbs(got, 1e-11 * std::max(1.0, std::fabs(got))));
    }
  }
}

TEST_CASE("delta and vertex weights", "[quantum]") {
  Level L(10);
  CHECK_THAT(L.kl_delta(0).value(), WithinAbs(1.0, 1e-15));
  CHECK_THAT(L.kl_delta(1).value(), WithinAbs(-std::sin(2 * kPi / 10) / std::sin(kPi / 10), 1e-14));
  CHECK(admissible_triple(2, 2, 1, 10));
  CHECK_FALSE(admissible_triple(2, 2, 2, 10));
  CHECK_FALSE(admissible_triple(1, 1, 5, 10));
}

TEST_CASE("signed-log sums", "[quantum]") {
  std::vector<SLog> t{SLog::of(3.0), SLog::of(-1.0), SLog::of(0.5), SLog::zero()};
  CHECK_THAT(slog_sum(t).value(), WithinAbs(2.5, 1e-15));
  CHECK(slog_sum({SLog::of(1.0), SLog::of(-1.0)}).is_zero());
  CHECK_THAT((SLog::of(-4.0) * SLog::of(0.25)).value(), WithinAbs(-1.0, 1e-15));
  CHECK_THAT(SLog::of(9.0).pow_half().value(), WithinAbs(3.0, 1e-15));
  CHECK_THROWS(SLog::of(-9.0).pow_half());
  CHECK_THROWS(SLog::of(1.0) / SLog::zero());
}
