// Copyright 2026 The curveops Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <stdexcept>
#include <vector>

namespace curveops {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Signed logarithm: value = sign * exp(log). sign == 0 encodes an exact zero.
struct SLog {
  long double log = 0.0L;
  int sign = 1;

  static SLog zero() { return {0.0, 0}; }
  static SLog of(double v) {
    if (v == 0.0) return zero();
    return {std::log(static_cast<long double>(std::fabs(v))), v < 0 ? -1 : 1};
  }
  double value() const { return sign == 0 ? 0.0 : static_cast<double>(sign * std::exp(log)); }
  bool is_zero() const { return sign == 0; }

  friend SLog operator*(SLog a, SLog b) {
    if (a.sign == 0 || b.sign == 0) return zero();
    return {a.log + b.log, a.sign * b.sign};
  }
  friend SLog operator/(SLog a, SLog b) {
    if (b.sign == 0) throw std::domain_error("SLog: division by zero");
    if (a.sign == 0) return zero();
    return {a.log - b.log, a.sign * b.sign};
  }
  SLog pow_half() const {
    if (sign < 0) throw std::domain_error("SLog: square root of negative value");
    if (sign == 0) return zero();
    return {0.5L * log, 1};
  }
};

// Sum of signed logs with max-scaling.
inline SLog slog_sum(const std::vector<SLog>& terms) {
  long double m = -std::numeric_limits<long double>::infinity();
  for (const auto& t : terms)
    if (t.sign != 0 && t.log > m) m = t.log;
  if (!std::isfinite(m)) return SLog::zero();
  long double s = 0.0L;
  for (const auto& t : terms)
    if (t.sign != 0) s += t.sign * std::exp(t.log - m);
  if (s == 0.0) return SLog::zero();
  return {m + std::log(std::fabs(s)), s < 0 ? -1 : 1};
}

// Per-level tables: <n> = sin(pi n / r) and log <n>! in extended precision.
// Products of more than kDirectFactors sines go through the log table.
class Level {
 public:
  static constexpr int kDirectFactors = 32;

  explicit Level(int r) : r_(r) {
    if (r < 2) throw std::invalid_argument("level r must be >= 2");
    sin_.resize(2 * r + 1);
    for (int n = 0; n <= 2 * r; ++n) sin_[n] = std::sin(kPi * n / r);
    sin_[0] = 0.0;
    sin_[r] = 0.0;
    sin_[2 * r] = 0.0;
    lfact_.resize(r);
    long double acc = 0.0L;
    const long double pi_l = 3.141592653589793238462643383279502884L;
    lfact_[0] = 0.0L;
    for (int n = 1; n < r; ++n) {
      acc += std::log(std::sin(pi_l * n / r));
      lfact_[n] = acc;
    }
    A_ = -std::polar(1.0, kPi / (2.0 * r));
    log_s1_ = std::log(std::sin(pi_l / r));
  }

  int r() const { return r_; }
  double hbar() const { return 1.0 / r_; }
  cplx A() const { return A_; }

  // <n> for any integer n (periodic extension, sign-correct).
  double qsin(int n) const {
    int m = n % (2 * r_);
    if (m < 0) m += 2 * r_;
    return sin_[m];
  }
  // <x> for half-integers given as 2x.
  double qsin_half(int twice) const {
    if (twice % 2 == 0) return qsin(twice / 2);
    return std::sin(kPi * (0.5 * twice) / r_);
  }

  // <n>! = prod_{i=1}^n <i>, zero for n >= r.
  double qfactorial(int n) const {
    if (n < 0) throw std::domain_error("negative factorial argument");
    if (n >= r_) return 0.0;
    if (n <= kDirectFactors) {
      double p = 1.0;
      for (int i = 1; i <= n; ++i) p *= sin_[i];
      return p;
    }
    return static_cast<double>(std::exp(lfact_[n]));
  }
  SLog log_qfactorial(int n) const {
    if (n < 0) throw std::domain_error("negative factorial argument");
    if (n >= r_) return SLog::zero();
    return {lfact_[n], 1};
  }

  // Kauffman-Lins quantities on Murakami-Vogel colors m = c - 1.
  // [n] = <n>/<1>, [n]! = <n>!/<1>^n.
  SLog kl_int(int n) const {
    if (n % r_ == 0) return SLog::zero();
    long double s = std::sin(3.141592653589793238462643383279502884L * n / r_);
    return SLog{std::log(std::fabs(s)), s < 0 ? -1 : 1} / SLog{log_s1_, 1};
  }
  SLog kl_fact(int n) const {
    SLog f = log_qfactorial(n);
    if (f.is_zero()) return f;
    return {f.log - n * log_s1_, 1};
  }
  SLog kl_delta(int m) const {
    SLog v = kl_int(m + 1);
    if (m % 2 != 0) v.sign = -v.sign;
    return v;
  }
  SLog kl_theta(int a, int b, int c) const {
    int i = (b + c - a) / 2, j = (a + c - b) / 2, k = (a + b - c) / 2;
    SLog v = kl_fact(i + j + k + 1) * kl_fact(i) * kl_fact(j) * kl_fact(k) /
             (kl_fact(i + j) * kl_fact(j + k) * kl_fact(i + k));
    if ((i + j + k) % 2 != 0) v.sign = -v.sign;
    return v;
  }
  // Tet[A B E; C D F] with faces (A,D,E),(B,C,E),(A,B,F),(C,D,F).
  SLog kl_tet(int A, int B, int E, int C, int D, int F) const {
    const int a[4] = {(A + D + E) / 2, (B + C + E) / 2, (A + B + F) / 2, (C + D + F) / 2};
    const int b[3] = {(B + D + E + F) / 2, (A + C + E + F) / 2, (A + B + C + D) / 2};
    SLog pre{0.0, 1};
    for (int bj : b)
      for (int ai : a) pre = pre * kl_fact(bj - ai);
    for (int x : {A, B, C, D, E, F}) pre = pre / kl_fact(x);
    int lo = std::max(std::max(a[0], a[1]), std::max(a[2], a[3]));
    int hi = std::min(std::min(b[0], b[1]), b[2]);
    std::vector<SLog> terms;
    for (int s = lo; s <= hi; ++s) {
      SLog t = kl_fact(s + 1);
      for (int ai : a) t = t / kl_fact(s - ai);
      for (int bj : b) t = t / kl_fact(bj - s);
      if (s % 2 != 0) t.sign = -t.sign;
      terms.push_back(t);
    }
    return pre * slog_sum(terms);
  }
  // Half-twist eigenvalue lambda^{ab}_c on MV colors.
  cplx kl_lambda(int a, int b, int c) const {
    long e = (static_cast<long>(c) * (c + 2) - static_cast<long>(a) * (a + 2) -
              static_cast<long>(b) * (b + 2)) / 2;
    cplx v = Apow(e);
    if (((a + b - c) / 2) % 2 != 0) v = -v;
    return v;
  }
  // A^e = (-1)^e exp(i pi e / 2r), exponent reduced exactly.
  cplx Apow(long e) const {
    long m = e % (4L * r_);
    if (m < 0) m += 4L * r_;
    cplx v = std::polar(1.0, kPi * static_cast<double>(m) / (2.0 * r_));
    return (e % 2 != 0) ? -v : v;
  }

 private:
  int r_;
  std::vector<double> sin_;
  std::vector<long double> lfact_;
  cplx A_;
  long double log_s1_;
};

inline double quantum_int(int n, const Level& L) { return L.qsin(n); }

// True when (a,b,c) are colors meeting at a vertex: odd sum, strict triangle, sum < 2r.
inline bool admissible_triple(int a, int b, int c, int r) {
  if (a < 1 || b < 1 || c < 1 || a >= r || b >= r || c >= r) return false;
  if ((a + b + c) % 2 == 0) return false;
  if (!(std::abs(a - b) < c && c < a + b)) return false;
  return a + b + c < 2 * r;
}

inline SLog log_vertex_weight(int a, int b, int c, const Level& L) {
  if (!admissible_triple(a, b, c, L.r()))
    throw std::domain_error("vertex_weight: inadmissible triple");
  return L.log_qfactorial((a + b + c - 1) / 2) * L.log_qfactorial((a + b - c - 1) / 2) *
         L.log_qfactorial((a - b + c - 1) / 2) * L.log_qfactorial((b + c - a - 1) / 2) /
         (L.log_qfactorial(a - 1) * L.log_qfactorial(b - 1) * L.log_qfactorial(c - 1));
}

inline double vertex_weight(int a, int b, int c, const Level& L) {
  return log_vertex_weight(a, b, c, L).value();
}

// Memoized tables keyed by r. Levels are immutable once built.
inline std::shared_ptr<const Level> level_for(int r) {
  thread_local std::vector<std::shared_ptr<const Level>> cache;
  for (const auto& p : cache)
    if (p->r() == r) return p;
  auto p = std::make_shared<const Level>(r);
  if (cache.size() > 16) cache.erase(cache.begin());
  cache.push_back(p);
  return p;
}

}  // namespace curveops
