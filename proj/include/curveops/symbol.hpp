// Copyright 2026 The curveops Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "coloring.hpp"
#include "curves.hpp"
#include "fusion.hpp"
#include "graph.hpp"
#include "quantum.hpp"

namespace curveops {

struct SymbolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Fourier = std::map<Shift, cplx>;

inline Fourier to_fourier(const Row& row) {
  Fourier f;
  for (const auto& t : row) f[t.k] += t.v;
  return f;
}

inline Fourier fourier_at(const DecoratedGraph& g, const Curve& cv, const Coloring& c, const Level& L) {
  return to_fourier(symbol_row(g, cv, c, L));
}

// Nearest admissible coloring to tau*r, at most 2 away per edge; ties go to smaller colors.
inline Coloring anchor_coloring(const DecoratedGraph& g, const std::vector<double>& tau, int r) {
  Coloring c = leg_colors(g, r);
  const auto& E = g.internal_edges;
  std::vector<std::vector<int>> cand(E.size());
  for (std::size_t i = 0; i < E.size(); ++i) {
    double x = tau[static_cast<std::size_t>(E[i])] * r;
    for (int v = static_cast<int>(std::floor(x)) - 2; v <= static_cast<int>(std::ceil(x)) + 2; ++v)
      if (v >= 1 && v < r && std::fabs(v - x) <= 2.0 + 1e-9) cand[i].push_back(v);
    std::stable_sort(cand[i].begin(), cand[i].end(),
                     [x](int a, int b) { return std::fabs(a - x) < std::fabs(b - x) - 1e-12; });
  }
  Coloring best;
  double best_d = 1e300;
  std::vector<std::size_t> idx(E.size(), 0);
  while (true) {
    Coloring t = c;
    double d = 0.0;
    for (std::size_t i = 0; i < E.size(); ++i) {
      int v = cand[i][idx[i]];
      t[static_cast<std::size_t>(E[i])] = v;
      double dx = v - tau[static_cast<std::size_t>(E[i])] * r;
      d += dx * dx;
    }
    bool better = d < best_d - 1e-12 ||
                  (std::fabs(d - best_d) <= 1e-12 && !best.empty() && t < best);
    if (better && is_admissible(t, g, r)) {
      best = t;
      best_d = d;
    }
    std::size_t i = 0;
    while (i < E.size() && ++idx[i] == cand[i].size()) idx[i++] = 0;
    if (i == E.size()) break;
  }
  if (best.empty()) throw SymbolError("no admissible coloring within distance 2 of tau*r at r=" + std::to_string(r));
  return best;
}

inline Coloring shifted(Coloring c, int e, int by) {
  c[static_cast<std::size_t>(e)] += by;
  return c;
}

inline bool stencil_ok(const DecoratedGraph& g, const Coloring& c, int r) {
  for (int e : g.internal_edges)
    for (int s : {-2, 2})
      if (!is_admissible(shifted(c, e, s), g, r)) return false;
  return true;
}

// d F_k / d tau_e by central differences with color step 2.
inline Fourier fd_tau(const DecoratedGraph& g, const Curve& cv, const Coloring& c, int e, const Level& L) {
  int r = L.r();
  Coloring cp = shifted(c, e, 2), cm = shifted(c, e, -2);
  if (!is_admissible(cp, g, r) || !is_admissible(cm, g, r))
    throw SymbolError("finite-difference stencil leaves U_r at r=" + std::to_string(r));
  Fourier fp = fourier_at(g, cv, cp, L), fm = fourier_at(g, cv, cm, L), out;
  for (const auto& [k, v] : fp) out[k] += v * (r / 4.0);
  for (const auto& [k, v] : fm) out[k] -= v * (r / 4.0);
  return out;
}

struct SymbolSample {
  int r = 0;
  Coloring anchor;
  double drift = 0.0;  // max |c/r - tau|
  Fourier F;           // transported to tau
  Fourier delta;       // sum_e (k_e/2) dF_k/dtau_e at the anchor
};

// Fourier data at level r, moved to tau with a one-term Taylor correction.
inline SymbolSample sample_symbol(const DecoratedGraph& g, const Curve& cv, const std::vector<double>& tau, int r,
                                  bool with_delta) {
  auto L = level_for(r);
  SymbolSample s;
  s.r = r;
  s.anchor = anchor_coloring(g, tau, r);
  s.F = fourier_at(g, cv, s.anchor, *L);
  std::vector<double> off(g.edges.size(), 0.0);
  bool transport = false;
  for (int e : g.internal_edges) {
    auto ue = static_cast<std::size_t>(e);
    off[ue] = tau[ue] - static_cast<double>(s.anchor[ue]) / r;
    s.drift = std::max(s.drift, std::fabs(off[ue]));
    if (std::fabs(off[ue]) > 1e-14) transport = true;
  }
  if (transport || with_delta) {
    for (int e : g.internal_edges) {
      Fourier d = fd_tau(g, cv, s.anchor, e, *L);
      auto ue = static_cast<std::size_t>(e);
      for (const auto& [k, v] : d) {
        if (transport) s.F[k] += off[ue] * v;
        if (with_delta && k[ue] != 0) s.delta[k] += 0.5 * k[ue] * v;
      }
    }
  }
  return s;
}

// Samples for several levels, computed concurrently, returned in level order.
inline std::vector<SymbolSample> sample_levels(const DecoratedGraph& g, const Curve& cv, const std::vector<double>& tau,
                                               const std::vector<int>& levels, bool with_delta) {
  std::vector<SymbolSample> out(levels.size());
  std::vector<std::string> err(levels.size());
  int nt = std::max(1, std::min(thread_count(), static_cast<int>(levels.size())));
  std::vector<std::thread> pool;
  for (int t = 0; t < nt; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = static_cast<std::size_t>(t); i < levels.size(); i += static_cast<std::size_t>(nt)) {
        try {
          out[i] = sample_symbol(g, cv, tau, levels[i], with_delta);
        } catch (const std::exception& ex) {
          err[i] = ex.what();
        }
      }
    });
  for (auto& th : pool) th.join();
  for (const auto& e : err)
    if (!e.empty()) throw SymbolError(e);
  return out;
}

struct PolyFit {
  std::vector<cplx> coef;  // coefficients of hbar^0, hbar^1, ...
  double rms = 0.0;
  double cond = 0.0;
};

// Least squares in hbar for complex data; columns scaled to unit max before QR.
inline PolyFit fit_poly(const std::vector<double>& h, const std::vector<cplx>& y, int degree) {
  int m = static_cast<int>(h.size()), n = degree + 1;
  if (m < n) throw SymbolError("fit needs at least " + std::to_string(n) + " levels");
  double hs = *std::max_element(h.begin(), h.end());
  Eigen::MatrixXd A(m, n);
  Eigen::MatrixXd Y(m, 2);
  for (int i = 0; i < m; ++i) {
    double x = h[static_cast<std::size_t>(i)] / hs, p = 1.0;
    for (int j = 0; j < n; ++j, p *= x) A(i, j) = p;
    Y(i, 0) = y[static_cast<std::size_t>(i)].real();
    Y(i, 1) = y[static_cast<std::size_t>(i)].imag();
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  Eigen::MatrixXd X = qr.solve(Y);
  PolyFit f;
  double p = 1.0;
  for (int j = 0; j < n; ++j, p /= hs) f.coef.push_back(cplx(X(j, 0), X(j, 1)) * p);
  Eigen::MatrixXd R = A * X - Y;
  f.rms = std::sqrt(R.squaredNorm() / m);
  Eigen::VectorXd d = qr.matrixQR().diagonal().cwiseAbs();
  f.cond = d.minCoeff() > 0 ? d.maxCoeff() / d.minCoeff() : INFINITY;
  if (!(f.cond < 1e12)) throw SymbolError("ill-conditioned extrapolation (levels too clustered)");
  return f;
}

// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] > 0)) continue;
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    ++n;
  }
  if (n < 2) return NAN;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct TermFit {
  Shift k;
  cplx F0 = 0.0, F1 = 0.0;
  cplx delta0 = 0.0;  // extrapolated first-order prediction
  double F1_spread = 0.0, delta_spread = 0.0;
  double rms = 0.0;
};

struct AsymptoticFit {
  std::string curve;
  std::vector<double> tau;
  std::vector<int> levels;
  int degree = 1;
  double cond = 0.0;
  double drift = 0.0;
  bool with_delta = false;
  std::vector<TermFit> terms;
  std::vector<SymbolSample> samples;

  Fourier F0() const {
    Fourier f;
    for (const auto& t : terms) f[t.k] = t.F0;
    return f;
  }
  Fourier F1() const {
    Fourier f;
    for (const auto& t : terms) f[t.k] = t.F1;
    return f;
  }
  Fourier delta() const {
    Fourier f;
    for (const auto& t : terms) f[t.k] = t.delta0;
    return f;
  }
};

inline int auto_degree(std::size_t m) { return m >= 4 ? 2 : 1; }

// Fit F_k(tau, hbar) = F0 + hbar F1 + ... per k; degree < 0 picks the default model.
inline AsymptoticFit extrapolate(const DecoratedGraph& g, const Curve& cv, const std::vector<double>& tau,
                                 std::vector<int> levels, int degree = -1, bool with_delta = false) {
  if (levels.size() < 3) throw SymbolError("extrapolation needs at least 3 levels");
  std::sort(levels.begin(), levels.end());
  AsymptoticFit fit;
  fit.curve = cv.id;
  fit.tau = tau;
  fit.levels = levels;
  fit.degree = degree < 0 ? auto_degree(levels.size()) : degree;
  fit.with_delta = with_delta;
  fit.samples = sample_levels(g, cv, tau, levels, with_delta);
  std::vector<double> h;
  for (const auto& s : fit.samples) {
    h.push_back(1.0 / s.r);
    fit.drift = std::max(fit.drift, s.drift);
  }
  std::map<Shift, int> ks;
  for (const auto& s : fit.samples)
    for (const auto& [k, v] : s.F) ks[k] = 1;
  for (const auto& [k, unused] : ks) {
    (void)unused;
    std::vector<cplx> y, dy;
    for (const auto& s : fit.samples) {
      auto it = s.F.find(k);
      y.push_back(it == s.F.end() ? cplx(0.0) : it->second);
      auto jt = s.delta.find(k);
      dy.push_back(jt == s.delta.end() ? cplx(0.0) : jt->second);
    }
    TermFit t;
    t.k = k;
    PolyFit p = fit_poly(h, y, fit.degree);
    t.F0 = p.coef[0];
    t.F1 = p.coef.size() > 1 ? p.coef[1] : cplx(0.0);
    t.rms = p.rms;
    fit.cond = std::max(fit.cond, p.cond);
    if (fit.degree >= 2) {
      PolyFit q = fit_poly(h, y, fit.degree - 1);
      t.F1_spread = std::abs(q.coef[1] - t.F1);
    }
    if (with_delta) {
      // the finite-difference error is O(hbar^2), one order fewer suffices
      int dd = std::max(1, fit.degree - 1);
      PolyFit pd = fit_poly(h, dy, dd);
      t.delta0 = pd.coef[0];
      PolyFit qd = fit_poly(h, dy, dd + 1 <= static_cast<int>(h.size()) - 1 ? dd + 1 : dd);
      t.delta_spread = std::abs(qd.coef[0] - t.delta0);
    }
    fit.terms.push_back(t);
  }
  return fit;
}

// sigma(theta) = sum_k F_k e^{i k.theta}
inline cplx evaluate(const Fourier& F, const std::vector<double>& theta) {
  cplx s = 0.0;
  for (const auto& [k, v] : F) {
    double ph = 0.0;
    for (std::size_t e = 0; e < k.size() && e < theta.size(); ++e) ph += k[e] * theta[e];
    s += v * std::exp(cplx(0.0, ph));
  }
  return s;
}

inline cplx sigma_chi(const DecoratedGraph& g, const Curve& cv, const Character& chi, const Fourier& F,
                      const std::vector<double>& theta) {
  return static_cast<double>(chi.value(g, project_class(g, cv))) * evaluate(F, theta);
}

// Default term D = F1 - Delta per k.
inline Fourier default_term(const AsymptoticFit& fit) {
  Fourier d;
  for (const auto& t : fit.terms) d[t.k] = t.F1 - t.delta0;
  return d;
}

inline double l1(const Fourier& f) {
  double s = 0.0;
  for (const auto& [k, v] : f) s += std::abs(v);
  return s;
}

// Residual |F(hbar) - F0 - hbar*first| summed over k, per sample.
inline std::vector<double> first_order_residuals(const AsymptoticFit& fit, const Fourier& first) {
  Fourier F0 = fit.F0();
  std::vector<double> out;
  for (const auto& s : fit.samples) {
    double h = 1.0 / s.r, acc = 0.0;
    std::map<Shift, int> ks;
    for (const auto& [k, v] : s.F) ks[k] = 1;
    for (const auto& [k, v] : F0) ks[k] = 1;
    for (const auto& [k, unused] : ks) {
      (void)unused;
      cplx a = s.F.count(k) ? s.F.at(k) : cplx(0.0);
      cplx b = F0.count(k) ? F0.at(k) : cplx(0.0);
      cplx c = first.count(k) ? first.at(k) : cplx(0.0);
      acc += std::abs(a - b - h * c);
    }
    out.push_back(acc);
  }
  return out;
}

// ---- composites

inline Fourier convolve(const Fourier& a, const Fourier& b) {
  Fourier out;
  for (const auto& [ka, va] : a)
    for (const auto& [kb, vb] : b) {
      Shift k = ka;
      for (std::size_t e = 0; e < k.size(); ++e) k[e] += kb[e];
      out[k] += va * vb;
    }
  return out;
}

inline Fourier fsub(Fourier a, const Fourier& b, cplx s = 1.0) {
  for (const auto& [k, v] : b) a[k] -= s * v;
  return a;
}

// Fourier data of the operator product T^A T^B at coloring c.
inline Fourier composite_symbol(const DecoratedGraph& g, const CurvePtr& A, const CurvePtr& B, const Coloring& c,
                                const Level& L) {
  auto P = make_product({A, B});
  return fourier_at(g, *P, c, L);
}

// Bracket term sum_e (1/i) d_tau sigma^A d_theta sigma^B in Fourier form.
inline Fourier bracket_term(const DecoratedGraph& g, const Curve& A, const Curve& B, const Coloring& c,
                            const Level& L) {
  Fourier fb = fourier_at(g, B, c, L), out;
  for (int e : g.internal_edges) {
    Fourier da = fd_tau(g, A, c, e, L);
    Fourier db;
    for (const auto& [k, v] : fb)
      if (k[static_cast<std::size_t>(e)] != 0) db[k] = cplx(0.0, k[static_cast<std::size_t>(e)]) * v;
    for (const auto& [k, v] : convolve(da, db)) out[k] += v / cplx(0.0, 1.0);
  }
  return out;
}

struct CompositeLevel {
  int r = 0;
  Fourier R;  // sigma^{AB} - sigma^A sigma^B
  Fourier B;  // bracket term
};

inline CompositeLevel composite_level(const DecoratedGraph& g, const CurvePtr& A, const CurvePtr& B,
                                      const std::vector<double>& tau, int r) {
  auto L = level_for(r);
  Coloring c = anchor_coloring(g, tau, r);
  CompositeLevel out;
  out.r = r;
  Fourier ab = composite_symbol(g, A, B, c, *L);
  out.R = fsub(ab, convolve(fourier_at(g, *A, c, *L), fourier_at(g, *B, c, *L)));
  out.B = bracket_term(g, *A, *B, c, *L);
  return out;
}

struct CompositeFit {
  std::string a, b;
  std::vector<int> levels;
  std::vector<double> K_by_level;  // R / (hbar B) projected on B
  double K = 0.0;                  // extrapolated bracket constant
  std::vector<double> residual;    // |R - K hbar B| per level
  double slope = NAN;
  double bracket_size = 0.0;
};

inline CompositeFit composite_fit(const DecoratedGraph& g, const CurvePtr& A, const CurvePtr& B,
                                  const std::vector<double>& tau, std::vector<int> levels) {
  std::sort(levels.begin(), levels.end());
  CompositeFit f;
  f.a = A->id;
  f.b = B->id;
  f.levels = levels;
  std::vector<CompositeLevel> cl(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) cl[i] = composite_level(g, A, B, tau, levels[i]);
  std::vector<double> h;
  std::vector<cplx> Ks;
  for (const auto& x : cl) {
    double hb = 1.0 / x.r;
    cplx num = 0.0;
    double den = 0.0;
    for (const auto& [k, v] : x.B) {
      cplx rv = x.R.count(k) ? x.R.at(k) : cplx(0.0);
      num += std::conj(v) * rv;
      den += std::norm(v);
    }
    f.bracket_size = std::max(f.bracket_size, std::sqrt(den));
    cplx K = den > 0 ? num / (hb * den) : cplx(0.0);
    h.push_back(hb);
    Ks.push_back(K);
    f.K_by_level.push_back(K.real());
  }
  f.K = fit_poly(h, Ks, std::min(2, static_cast<int>(h.size()) - 1)).coef[0].real();
  std::vector<double> hh;
  for (const auto& x : cl) {
    double hb = 1.0 / x.r;
    f.residual.push_back(l1(fsub(x.R, x.B, f.K * hb)));
    hh.push_back(hb);
  }
  f.slope = loglog_slope(hh, f.residual);
  return f;
}

// ---- reports

inline nlohmann::json cjson(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

inline nlohmann::json shift_json(const Shift& k) { return nlohmann::json(k); }

inline nlohmann::json fit_report_json(const DecoratedGraph& g, const AsymptoticFit& fit) {
  nlohmann::json j;
  j["curve"] = fit.curve;
  nlohmann::json tau = nlohmann::json::object();
  for (int e : g.internal_edges) tau[g.edges[static_cast<std::size_t>(e)].id] = fit.tau[static_cast<std::size_t>(e)];
  j["tau"] = tau;
  j["levels"] = fit.levels;
  j["degree"] = fit.degree;
  j["condition"] = fit.cond;
  j["anchor_drift"] = fit.drift;
  Fourier first = fit.with_delta ? fit.delta() : fit.F1();
  auto res = first_order_residuals(fit, first);
  std::vector<double> h;
  for (int r : fit.levels) h.push_back(1.0 / r);
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : fit.terms) {
    std::vector<double> rk;
    for (const auto& s : fit.samples) {
      cplx a = s.F.count(t.k) ? s.F.at(t.k) : cplx(0.0);
      rk.push_back(std::abs(a - t.F0 - (1.0 / s.r) * (fit.with_delta ? t.delta0 : t.F1)));
    }
    nlohmann::json x;
    x["k"] = shift_json(t.k);
    x["F0"] = cjson(t.F0);
    x["F1"] = cjson(t.F1);
    if (fit.with_delta) x["delta"] = cjson(t.delta0);
    x["residual"] = *std::max_element(rk.begin(), rk.end());
    double sl = loglog_slope(h, rk);
    x["slope"] = std::isfinite(sl) ? nlohmann::json(sl) : nlohmann::json(nullptr);
    x["fit_rms"] = t.rms;
    terms.push_back(x);
  }
  j["terms"] = terms;
  return j;
}

inline void convergence_csv(std::ostream& os, const std::vector<int>& levels, const std::vector<double>& residual) {
  os << "r,hbar,residual\n";
  char buf[96];
  for (std::size_t i = 0; i < levels.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", levels[i], 1.0 / levels[i], residual[i]);
    os << buf;
  }
}

}  // namespace curveops
