// Copyright 2026 The curveops Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "coloring.hpp"
#include "curves.hpp"
#include "graph.hpp"
#include "quantum.hpp"

namespace curveops {

struct FusionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {
inline double checked_sqrt(double x, const char* what) {
  if (x < -1e-12) throw FusionError(std::string(what) + ": negative square-root argument");
  return x > 0 ? std::sqrt(x) : 0.0;
}
}  // namespace detail

// F_{eps,mu}(a,b,c): fusing one arc between the circles colored b and c; a is the third circle.
// b is shifted by eps and c by mu.
inline double coeff_F(int eps, int mu, int a, int b, int c, const Level& L) {
  if ((eps != 1 && eps != -1) || (mu != 1 && mu != -1)) throw FusionError("coeff_F: shifts must be +-1");
  if (eps == -1 && mu == 1) return coeff_F(1, -1, a, c, b, L);
  double den = L.qsin(b) * L.qsin(c);
  if (den <= 0) throw FusionError("coeff_F: color out of range");
  double num;
  double sg = -1.0;
  if (eps == 1 && mu == 1) {
    num = L.qsin((a + b + c + 1) / 2) * L.qsin((b + c - a + 1) / 2);
    sg = 1.0;
  } else if (eps == -1 && mu == -1) {
    num = L.qsin((a + b + c - 1) / 2) * L.qsin((b + c - a - 1) / 2);
  } else {
    num = L.qsin((a + b - c + 1) / 2) * L.qsin((a - b + c - 1) / 2);
  }
  return sg * detail::checked_sqrt(num / den, "coeff_F");
}

enum class AnnulusFamily { G, H, L };

inline cplx coeff_annulus(AnnulusFamily fam, int sign, int n, const Level& L) {
  int r = L.r();
  if (n < 1 || n + sign < 1 || n + sign > r - 1 || (sign != 1 && sign != -1))
    throw FusionError("coeff_annulus: color out of range");
  double mod = std::sqrt(L.qsin(n + sign) / L.qsin(n));
  double par = (n + 1) % 2 == 0 ? 1.0 : -1.0;
  double ph = 0.0;
  switch (fam) {
    case AnnulusFamily::G:
      ph = sign > 0 ? -(n - 1) : (n + 1);
      break;
    case AnnulusFamily::H:
      ph = sign > 0 ? (n - 1) : -(n + 1);
      break;
    case AnnulusFamily::L:
      ph = sign > 0 ? (n + 2) : -(n - 2);
      break;
  }
  return par * mod * std::polar(1.0, kPi * ph / r);
}

// Pants with alpha arcs b-c, beta arcs a-c, gamma arcs a-b, fused in that order.
// eps: shifts of a (beta arcs then gamma arcs), mu: of b (alpha then gamma), nu: of c (alpha then beta).
// Returns 0 when a fusion step leaves the admissible range.
inline double pants_reduce(int alpha, int beta, int gamma, int a, int b, int c, const std::vector<int>& eps,
                           const std::vector<int>& mu, const std::vector<int>& nu, const Level& L) {
  if (static_cast<int>(eps.size()) != beta + gamma || static_cast<int>(mu.size()) != alpha + gamma ||
      static_cast<int>(nu.size()) != alpha + beta)
    throw FusionError("pants_reduce: shift vectors do not match the arc counts");
  if (!admissible_triple(a, b, c, L.r())) throw FusionError("pants_reduce: inadmissible colors");
  double p = 1.0;
  int A = a, B = b, C = c;
  auto step = [&](int sx, int sy, int z, int& x, int& y) {
    int nx = x + sx, ny = y + sy;
    if (!admissible_triple(z, nx, ny, L.r())) return false;
    p *= coeff_F(sx, sy, z, x, y, L);
    x = nx;
    y = ny;
    return true;
  };
  for (int i = 0; i < alpha; ++i)
    if (!step(mu[i], nu[i], A, B, C)) return 0.0;
  for (int i = 0; i < beta; ++i)
    if (!step(eps[i], nu[alpha + i], B, A, C)) return 0.0;
  for (int i = 0; i < gamma; ++i)
    if (!step(mu[alpha + i], eps[beta + i], C, B, A)) return 0.0;
  return p;
}

// Bigon factor per crossing of an annulus: sign mu times (<c>/<c+mu>)^{1/2}.
inline double band_glue(int c, int mu, const Level& L) {
  return mu * std::sqrt(L.qsin(c) / L.qsin(c + mu));
}

struct Candlestick {
  int n = 1;
  std::vector<int> eps;    // color shift at each leg, bottom to top
  std::vector<int> sides;  // +1 right, -1 left
};

// Proportionality factor of two glued candlesticks by bigon elimination.
inline double candlestick_glue(const Candlestick& top, const Candlestick& bottom, const Level& L) {
  if (top.n != bottom.n) throw FusionError("candlestick_glue: bottom colors differ");
  if (top.eps.size() != bottom.eps.size() || top.sides.size() != top.eps.size() ||
      bottom.sides.size() != bottom.eps.size())
    throw FusionError("candlestick_glue: leg counts differ");
  int st = 0, sb = 0;
  for (int x : top.eps) st += x;
  for (int x : bottom.eps) sb += x;
  if (st != sb) return 0.0;
  std::size_t k = top.eps.size();
  double f = 1.0;
  int partial = top.n;
  for (std::size_t i = 0; i < k; ++i) {
    // upper leg of the top piece against the lower leg of the bottom piece
    if (i > 0 && top.sides[k - 1 - i] != bottom.sides[i])
      throw CapabilityError("candlestick gluing needs the leg-exchange formulas");
    int next = partial + top.eps[i];
    if (next < 1 || next >= L.r()) return 0.0;
    f *= std::sqrt(L.qsin(next) / L.qsin(partial));
    partial = next;
  }
  return f;
}

// Half-twist factor for a strand switching sides across an edge of color c while shifting it by mu.
inline cplx switch_factor(int c, int mu, bool conjugate, const Level& L) {
  cplx v = mu > 0 ? L.Apow(c - 1) : -L.Apow(-c - 1);
  return conjugate ? std::conj(v) : v;
}

// ---- rows

using Shift = std::vector<int>;

struct Term {
  Shift k;
  cplx v;
};

using Row = std::vector<Term>;

namespace detail {

// z * exp(log)
struct CLog {
  long double log = 0.0L;
  cplx z = 0.0;
};

inline CLog clog_of(SLog s, cplx phase = 1.0) {
  if (s.is_zero()) return {0.0, 0.0};
  return {s.log, static_cast<double>(s.sign) * phase};
}
inline CLog clog_mul(CLog a, CLog b) { return {a.log + b.log, a.z * b.z}; }
inline CLog clog_sum(const std::vector<CLog>& ts) {
  long double m = -1e300L;
  for (const auto& t : ts)
    if (t.z != 0.0 && t.log > m) m = t.log;
  if (m == -1e300L) return {0.0L, 0.0};
  std::complex<long double> s = 0.0L;
  for (const auto& t : ts)
    if (t.z != 0.0) s += std::complex<long double>(t.z) * std::exp(t.log - m);
  // renormalize so that |z| stays O(1)
  long double a = std::abs(s);
  if (a == 0.0L) return {0.0L, 0.0};
  return {m + std::log(a), cplx(s / a)};
}
inline cplx clog_value(CLog c) { return c.z == 0.0 ? cplx(0.0) : c.z * static_cast<double>(std::exp(c.log)); }

// Admissibility of a triple of MV colors.
inline bool adm_mv(int x, int y, int z, int r) {
  if (x < 0 || y < 0 || z < 0) return false;
  if ((x + y + z) % 2 != 0) return false;
  if (z < std::abs(x - y) || z > x + y) return false;
  return x + y + z <= 2 * r - 4;
}

inline void add_term(std::map<Shift, cplx>& acc, const Shift& k, cplx v) { acc[k] += v; }

inline Row to_row(const std::map<Shift, cplx>& acc) {
  Row out;
  for (const auto& [k, v] : acc) out.push_back({k, v});
  return out;
}

}  // namespace detail

inline Row cycle_row(const DecoratedGraph& g, const Curve& cv, const Coloring& c, const Level& L) {
  const auto& es = cv.cycle_edges;
  auto sw = cycle_switches(g, cv);
  int cbar = cocycle_sign(c, g, cv);
  std::map<Shift, cplx> acc;
  std::size_t n = es.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    Shift k(g.edges.size(), 0);
    for (std::size_t i = 0; i < n; ++i) k[es[i]] = (mask >> i & 1u) ? -1 : 1;
    Coloring t = c;
    for (std::size_t e = 0; e < k.size(); ++e) t[e] += k[e];
    if (!is_admissible(t, g, L.r())) continue;
    cplx v = static_cast<double>(cbar);
    for (const auto& p : cv.passages) {
      int ei = g.halfedges[p.h_in].edge, eo = g.halfedges[p.h_out].edge;
      int third = -1;
      for (int h : g.vertices[p.v].cyclic)
        if (h != p.h_in && h != p.h_out) third = g.halfedges[h].edge;
      v *= coeff_F(k[ei], k[eo], c[third], c[ei], c[eo], L);
    }
    for (int e : es) {
      v *= band_glue(c[e], k[e], L);
      int s = sw.at(e);
      if (s != 0) v *= switch_factor(c[e], k[e], s > 0, L);
    }
    detail::add_term(acc, k, v);
  }
  return detail::to_row(acc);
}

// Dual curve of a joining edge: each leg wrap is a fusion with a squared half-twist followed by
// two triangle reductions with unit edges.
inline Row joind_row(const DecoratedGraph& g, int e, const Coloring& c, const Level& L) {
  using detail::CLog;
  const Edge& E = g.edges[e];
  int h0 = E.h[0], h1 = E.h[1];
  int ea = g.halfedges[g.next(h0)].edge, ed = g.halfedges[g.next(g.next(h0))].edge;
  int ec = g.halfedges[g.next(h1)].edge, eb = g.halfedges[g.next(g.next(h1))].edge;
  int ca = c[ea], cb = c[eb], cc = c[ec], cd = c[ed], ce = c[e];
  int r = L.r();
  int M = ce - 1;
  auto side = [&](int Lm, int Ex, int e1, int e2, int s) {
    std::vector<CLog> ts;
    for (int dp : {Lm - 1, Lm + 1}) {
      if (!detail::adm_mv(Lm, 1, dp, r) || !detail::adm_mv(Ex, e1, dp, r) || !detail::adm_mv(Ex, e2, Lm, r) ||
          !detail::adm_mv(Ex, dp, e1, r))
        continue;
      cplx lam = L.kl_lambda(Lm, 1, dp);
      cplx ph = s > 0 ? lam * lam : std::conj(lam * lam);
      SLog mag = L.kl_delta(dp) / L.kl_theta(Lm, 1, dp) * L.kl_tet(Ex, e1, M, 1, Lm, dp) /
                 L.kl_theta(Ex, e1, dp) * L.kl_tet(Ex, e2, e1, 1, dp, Lm) / L.kl_theta(Ex, e2, Lm);
      ts.push_back(detail::clog_of(mag, ph));
    }
    return detail::clog_sum(ts);
  };
  auto nsq = [&](int x) {
    return log_vertex_weight(ca, cd, x, L) * log_vertex_weight(cb, cc, x, L) / SLog::of(L.qsin(x));
  };
  SLog n0 = nsq(ce);
  std::map<Shift, cplx> acc;
  for (int e2 = M - 2; e2 <= M + 2; e2 += 2) {
    int target = e2 + 1;
    if (!admissible_triple(ca, cd, target, r) || !admissible_triple(cb, cc, target, r)) continue;
    std::vector<CLog> ts;
    for (int e1 : {M - 1, M + 1}) {
      if (!detail::adm_mv(M, 1, e1, r) || !detail::adm_mv(e1, 1, e2, r)) continue;
      SLog pre = L.kl_delta(e1) / L.kl_theta(M, 1, e1) * L.kl_delta(e2) / L.kl_theta(e1, 1, e2);
      CLog t = detail::clog_of(pre);
      t = detail::clog_mul(t, side(cd - 1, ca - 1, e1, e2, +2));
      t = detail::clog_mul(t, side(cc - 1, cb - 1, e1, e2, -2));
      ts.push_back(t);
    }
    CLog tot = detail::clog_sum(ts);
    SLog norm = (nsq(target) / n0).pow_half();
    tot.log += norm.log;
    cplx v = detail::clog_value(tot);
    if (v == 0.0) continue;
    Shift k(g.edges.size(), 0);
    k[e] = target - ce;
    detail::add_term(acc, k, v);
  }
  return detail::to_row(acc);
}

// ---- closed forms for the dual curve of one edge (angles in radians, h = pi/r)

template <class T>
T closed_W(T t, T a, T h) {
  using std::sin;
  return std::sqrt(sin(t + a / 2 + h / 2) * sin(t - a / 2 + h / 2) / (sin(t) * sin(t + h)));
}

template <class T>
T closed_I(T ta, T tb, T tc, T td, T te, T h) {
  auto s = [](T x) { return std::sin(x); };
  T v = 2 * std::cos(tc + td - h) + 4 * s((ta + td - te - h) / 2) * s((ta - td + te + h) / 2) *
                                        s((tb + tc - te - h) / 2) * s((tb - tc + te + h) / 2) / (s(te) * s(te + h));
  // at c_e = 1 the last term is 0/0 with a double zero on top (a = d, b = c), limit 0
  if (te - h != 0)
    v += 4 * s((ta + td + te - h) / 2) * s((-ta + td + te - h) / 2) * s((tb + tc + te - h) / 2) *
         s((-tb + tc + te - h) / 2) / (s(te) * s(te - h));
  return v;
}

template <class T>
T closed_J(T ta, T tb, T tc, T td, T te, T h) {
  auto s = [](T x) { return std::sin(x); };
  T p = s((ta + td - te - h) / 2) * s((ta - td + te + h) / 2) * s((tb + tc - te - h) / 2) *
        s((tb - tc + te + h) / 2) / (s(te) * s(te + h));
  T q = s((ta + td + te + h) / 2) * s((-ta + td + te + h) / 2) * s((tb + tc + te + h) / 2) *
        s((-tb + tc + te + h) / 2) / (s(te + h) * s(te + 2 * h));
  return 4 * std::sqrt(std::max(p * q, T(0)));  // rounding can push a vanishing product below zero
}

// Expected coefficient of shift k on edge e in the symbol of D_e at coloring c.
// Loop: W(.., +-h) for k = +-1. Joining: -I (k = 0), J (k = 2), J at c_e - 2 (k = -2).
inline double closed_form_dual(const DecoratedGraph& g, int e, const Coloring& c, int k, int r) {
  // extended precision: the three terms of I cancel strongly near the boundary of U
  using T = long double;
  const T u = 3.141592653589793238462643383279502884L / r;
  const Edge& E = g.edges[static_cast<std::size_t>(e)];
  if (E.kind == EdgeKind::Loop) {
    int f = -1;
    for (int h : g.vertices[static_cast<std::size_t>(g.halfedges[E.h[0]].vertex)].cyclic)
      if (g.halfedges[h].edge != e) f = g.halfedges[h].edge;
    if (k != 1 && k != -1) return 0.0;
    return static_cast<double>(closed_W<T>(u * c[e], u * c[f], k * u));
  }
  int h0 = E.h[0], h1 = E.h[1];
  T ta = u * c[g.halfedges[g.next(h0)].edge], td = u * c[g.halfedges[g.next(g.next(h0))].edge];
  T tc = u * c[g.halfedges[g.next(h1)].edge], tb = u * c[g.halfedges[g.next(g.next(h1))].edge];
  T te = u * c[e];
  if (k == 0) return static_cast<double>(-closed_I<T>(ta, tb, tc, td, te, u));
  if (k == 2) return static_cast<double>(closed_J<T>(ta, tb, tc, td, te, u));
  if (k == -2) return static_cast<double>(closed_J<T>(ta, tb, tc, td, te - 2 * u, u));
  return 0.0;
}

Row curve_row(const DecoratedGraph& g, const Curve& cv, const Coloring& c, const Level& L);

// Phase of the quantum Dehn twist: (mu_{c+k}/mu_c)^m with mu_c = (-1)^{c-1} A^{c^2-1}.
inline cplx twist_phase(int c, int k, int m, const Level& L) {
  long d = static_cast<long>(c + k) * (c + k) - static_cast<long>(c) * c;
  cplx v = L.Apow(static_cast<long>(m) * d);
  return ((static_cast<long>(m) * k) % 2 != 0) ? -v : v;
}

inline Row compose_rows(const DecoratedGraph& g, const std::vector<CurvePtr>& parts, const Coloring& c,
                        const Level& L) {
  std::map<Shift, cplx> cur;
  cur[Shift(g.edges.size(), 0)] = 1.0;
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
    std::map<Shift, cplx> nxt;
    for (const auto& [k, v] : cur) {
      if (v == 0.0) continue;
      Coloring t = c;
      for (std::size_t e = 0; e < k.size(); ++e) t[e] += k[e];
      for (const auto& term : curve_row(g, **it, t, L)) {
        Shift k2 = k;
        for (std::size_t e = 0; e < k2.size(); ++e) k2[e] += term.k[e];
        nxt[k2] += v * term.v;
      }
    }
    cur.swap(nxt);
  }
  return detail::to_row(cur);
}

// T phi_c = sum over terms of v * phi_{c+k}, sign cocycle included.
inline Row curve_row(const DecoratedGraph& g, const Curve& cv, const Coloring& c, const Level& L) {
  switch (cv.kind) {
    case CurveKind::Decomp: {
      Row r;
      r.push_back({Shift(g.edges.size(), 0), -2.0 * std::cos(kPi * c[cv.edge] / L.r())});
      return r;
    }
    case CurveKind::LoopD:
    case CurveKind::Cycle:
      return cycle_row(g, cv, c, L);
    case CurveKind::JoinD:
      return joind_row(g, cv.edge, c, L);
    case CurveKind::Twist: {
      Row r = curve_row(g, *cv.parts[0], c, L);
      for (auto& t : r) t.v *= twist_phase(c[cv.edge], t.k[cv.edge], cv.twist, L);
      return r;
    }
    case CurveKind::Union:
    case CurveKind::Product:
      return compose_rows(g, cv.parts, c, L);
  }
  return {};
}

// Smooth coefficients F_k(c/r, 1/r): the row with the sign cocycle divided out.
inline Row symbol_row(const DecoratedGraph& g, const Curve& cv, const Coloring& c, const Level& L) {
  Row r = curve_row(g, cv, c, L);
  double s = cocycle_sign(c, g, cv);
  for (auto& t : r) t.v *= s;
  return r;
}

inline cplx row_coeff(const Row& r, const Shift& k) {
  for (const auto& t : r)
    if (t.k == k) return t.v;
  return 0.0;
}

// ---- assembled operators

struct Triplet {
  int source = 0;
  int target = 0;
  cplx v;
};

inline int thread_count() {
  if (const char* s = std::getenv("CURVEOPS_THREADS")) {
    int n = std::atoi(s);
    if (n >= 1) return n;
  }
  unsigned h = std::thread::hardware_concurrency();
  return h == 0 ? 1 : static_cast<int>(h);
}

struct SparseOperator {
  int r = 0;
  std::string curve;
  std::vector<Coloring> basis;
  std::vector<std::vector<Term>> rows;  // per source coloring
  std::vector<Triplet> entries;         // T[target][source]
};

inline SparseOperator assemble_operator(const DecoratedGraph& g, const Curve& cv, int r, int threads = 0) {
  auto Lp = level_for(r);
  SparseOperator op;
  op.r = r;
  op.curve = cv.id;
  op.basis = enumerate_colorings(g, r);
  ColoringIndex index(g, r, op.basis);
  op.rows.resize(op.basis.size());
  int nt = threads > 0 ? threads : thread_count();
  nt = std::max(1, std::min<int>(nt, static_cast<int>(op.basis.size() / 64 + 1)));
  std::vector<std::string> errors(static_cast<std::size_t>(nt));
  auto work = [&](int t) {
    try {
      auto L = level_for(r);
      for (std::size_t i = static_cast<std::size_t>(t); i < op.basis.size(); i += static_cast<std::size_t>(nt))
        op.rows[i] = curve_row(g, cv, op.basis[i], *L);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(t)] = e.what();
    }
  };
  if (nt == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (!e.empty()) throw FusionError(e);
  for (std::size_t i = 0; i < op.basis.size(); ++i)
    for (const auto& t : op.rows[i]) {
      Coloring tc = op.basis[i];
      for (std::size_t e = 0; e < tc.size(); ++e) tc[e] += t.k[e];
      int j = index.find(tc);
      if (j < 0) throw FusionError("row leaves the admissible set");
      op.entries.push_back({static_cast<int>(i), j, t.v});
    }
  (void)Lp;
  return op;
}

// max |T[i][j] - conj T[j][i]| relative to the largest entry
inline double hermiticity_error(const SparseOperator& op) {
  std::map<std::pair<int, int>, cplx> m;
  double big = 0.0;
  for (const auto& t : op.entries) {
    m[{t.target, t.source}] += t.v;
    big = std::max(big, std::abs(t.v));
  }
  double err = 0.0;
  for (const auto& [ij, v] : m) {
    auto it = m.find({ij.second, ij.first});
    cplx w = it == m.end() ? cplx(0.0) : it->second;
    err = std::max(err, std::abs(v - std::conj(w)));
  }
  return big > 0 ? err / std::max(1.0, big) : err;
}

// Max absolute row sum: an upper bound for the 2-norm of a Hermitian matrix.
inline double schur_bound(const SparseOperator& op) {
  std::vector<double> s(op.basis.size(), 0.0);
  for (const auto& t : op.entries) s[static_cast<std::size_t>(t.target)] += std::abs(t.v);
  double m = 0.0;
  for (double x : s) m = std::max(m, x);
  return m;
}

// Largest eigenvalue modulus of a Hermitian sparse matrix by power iteration on T^2.
inline double norm_estimate(const SparseOperator& op, int iters = 400) {
  std::size_t n = op.basis.size();
  if (n == 0) return 0.0;
  std::vector<cplx> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.001 * static_cast<double>(i % 7);
  auto apply = [&](const std::vector<cplx>& in, std::vector<cplx>& out) {
    std::fill(out.begin(), out.end(), cplx(0.0));
    for (const auto& t : op.entries) out[static_cast<std::size_t>(t.target)] += t.v * in[static_cast<std::size_t>(t.source)];
  };
  double lam = 0.0;
  for (int it = 0; it < iters; ++it) {
    apply(x, y);
    apply(y, x);
    double nrm = 0.0;
    for (auto& v : x) nrm += std::norm(v);
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) return 0.0;
    double prev = lam;
    lam = std::sqrt(nrm);
    for (auto& v : x) v /= nrm;
    if (it > 10 && std::fabs(lam - prev) < 1e-13 * lam) break;
  }
  return lam;
}

inline nlohmann::json operator_manifest(const DecoratedGraph& g, const SparseOperator& op) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(g.hash()));
  return {{"r", op.r}, {"curve", op.curve}, {"graph_hash", buf}, {"dimension", op.basis.size()},
          {"nonzeros", op.entries.size()}};
}

inline nlohmann::json operator_json(const DecoratedGraph& g, const SparseOperator& op) {
  nlohmann::json j;
  j["manifest"] = operator_manifest(g, op);
  j["basis"] = op.basis;
  nlohmann::json t = nlohmann::json::array();
  for (std::size_t i = 0; i < op.rows.size(); ++i)
    for (const auto& term : op.rows[i]) t.push_back({{"c", i}, {"k", term.k}, {"re", term.v.real()}, {"im", term.v.imag()}});
  j["triplets"] = t;
  return j;
}

inline void write_operator_csv(std::ostream& os, const SparseOperator& op) {
  os << "c_index,k,re,im\n";
  char buf[64];
  for (std::size_t i = 0; i < op.rows.size(); ++i)
    for (const auto& term : op.rows[i]) {
      os << i << ",\"";
      for (std::size_t e = 0; e < term.k.size(); ++e) os << (e ? " " : "") << term.k[e];
      std::snprintf(buf, sizeof buf, "%.17g,%.17g", term.v.real(), term.v.imag());
      os << "\"," << buf << "\n";
    }
}

}  // namespace curveops
