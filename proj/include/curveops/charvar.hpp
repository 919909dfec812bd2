// Copyright 2026 The curveops Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Geometry>
#include <json.hpp>

#include "coloring.hpp"
#include "curves.hpp"
#include "graph.hpp"
#include "quantum.hpp"

namespace curveops {

struct CharvarError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Quat = Eigen::Quaterniond;
using Vec3 = Eigen::Vector3d;

inline Quat qexp(double t, const Vec3& n) {
  Vec3 v = std::sin(t) * n;
  return Quat(std::cos(t), v.x(), v.y(), v.z());
}
inline Vec3 qaxis(const Quat& q) {
  Vec3 v = q.vec();
  double s = v.norm();
  if (s < 1e-15) throw CharvarError("axis of a central element");
  return v / s;
}
inline double qtrace(const Quat& q) { return 2.0 * q.w(); }
inline Quat qinv(const Quat& q) { return q.conjugate(); }
inline Quat qadd(const Quat& a, const Quat& b) { return Quat(a.coeffs() + b.coeffs()); }
inline Quat qscale(double s, const Quat& a) { return Quat(s * a.coeffs()); }
inline Quat qpure(const Vec3& n) { return Quat(0.0, n.x(), n.y(), n.z()); }

// A, B, C with ABC = 1 and traces 2cos(pi t); A on the i axis, B in the ij plane.
inline std::array<Quat, 3> pants_rep(double ta, double tb, double tc) {
  double a = kPi * ta, b = kPi * tb, c = kPi * tc;
  if (!(ta > 0 && tb > 0 && tc > 0 && ta < 1 && tb < 1 && tc < 1))
    throw CharvarError("pants_rep: actions must lie in (0,1)");
  if (!(std::fabs(ta - tb) < tc && tc < ta + tb && ta + tb + tc < 2.0))
    throw CharvarError("pants_rep: inadmissible action triple");
  double cphi = (std::cos(a) * std::cos(b) - std::cos(c)) / (std::sin(a) * std::sin(b));
  if (!(std::fabs(cphi) < 1.0)) throw CharvarError("pants_rep: no solution");
  double sphi = std::sqrt(1.0 - cphi * cphi);
  Quat A = qexp(a, Vec3(1, 0, 0));
  Quat B = qexp(b, Vec3(cphi, sphi, 0));
  Quat C = qinv(A * B);
  return {A, B, C};
}

// g with g P g^{-1} = Q, for P and Q of equal trace.
inline Quat conj_to(const Quat& P, const Quat& Q) {
  Vec3 u = qaxis(P), v = qaxis(Q);
  Vec3 w = u.cross(v);
  double s = w.norm(), c = u.dot(v);
  if (s < 1e-14) {
    if (c > 0) return Quat(1, 0, 0, 0);
    Vec3 perp = std::fabs(u.x()) < 0.9 ? u.cross(Vec3(1, 0, 0)) : u.cross(Vec3(0, 1, 0));
    perp.normalize();
    return qpure(perp);
  }
  return qexp(0.5 * std::atan2(s, c), w / s);
}

// Words: letter +-(i+1) is generator i to the power +-1.
using Word = std::vector<int>;

inline Word word_inverse(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& x : out) x = -x;
  return out;
}

inline Word word_power(const Word& w, int m) {
  Word out;
  const Word base = m >= 0 ? w : word_inverse(w);
  for (int i = 0; i < std::abs(m); ++i) out.insert(out.end(), base.begin(), base.end());
  return out;
}

inline Word cat(std::initializer_list<Word> ws) {
  Word out;
  for (const auto& w : ws) out.insert(out.end(), w.begin(), w.end());
  return out;
}

inline Word substitute(const Word& w, const std::map<int, Word>& images) {
  Word out;
  for (int x : w) {
    int i = std::abs(x) - 1;
    auto it = images.find(i);
    if (it == images.end()) {
      out.push_back(x);
    } else {
      Word im = x > 0 ? it->second : word_inverse(it->second);
      out.insert(out.end(), im.begin(), im.end());
    }
  }
  return out;
}

inline Quat eval_word(const Word& w, const std::vector<Quat>& gens) {
  Quat q(1, 0, 0, 0);
  for (int x : w) {
    int i = std::abs(x) - 1;
    if (i < 0 || i >= static_cast<int>(gens.size())) throw CharvarError("unknown generator in word");
    q = q * (x > 0 ? gens[static_cast<std::size_t>(i)] : qinv(gens[static_cast<std::size_t>(i)]));
  }
  return q;
}

// Derivative of the word's holonomy given tangents of the generator images.
inline Quat eval_word_tangent(const Word& w, const std::vector<Quat>& gens, const std::vector<Quat>& dgens) {
  std::vector<Quat> f;
  for (int x : w) {
    int i = std::abs(x) - 1;
    f.push_back(x > 0 ? gens[static_cast<std::size_t>(i)] : qinv(gens[static_cast<std::size_t>(i)]));
  }
  Quat total(0, 0, 0, 0);
  for (std::size_t j = 0; j < w.size(); ++j) {
    int i = std::abs(w[j]) - 1;
    const Quat& g = gens[static_cast<std::size_t>(i)];
    const Quat& dg = dgens[static_cast<std::size_t>(i)];
    Quat d = w[j] > 0 ? dg : qscale(-1.0, qinv(g) * dg * qinv(g));
    Quat left(1, 0, 0, 0), right(1, 0, 0, 0);
    for (std::size_t k = 0; k < j; ++k) left = left * f[k];
    for (std::size_t k = j + 1; k < w.size(); ++k) right = right * f[k];
    total = qadd(total, left * d * right);
  }
  return total;
}

inline double trace_fn(const Word& w, const std::vector<Quat>& gens) { return -qtrace(eval_word(w, gens)); }

// One test surface: generators, raw action-angle construction and curve words.
struct SurfaceModel {
  std::string name;
  std::vector<std::string> generators;
  std::vector<Word> relations;  // words equal to the identity
  // raw representation at angle origin 0 (tau, theta indexed by edge)
  std::function<std::vector<Quat>(const std::vector<double>&, const std::vector<double>&)> build;
  // d/dtheta_e of the generator images
  std::function<std::vector<Quat>(const std::vector<double>&, const std::vector<double>&, int)> tangent;
  std::map<std::string, Word> words;  // keyed by canonical simple-curve id
  std::function<std::map<int, Word>(int, int)> twist_images;  // (edge, m) -> substitution

  Word parse_word(const std::string& s) const {
    std::istringstream in(s);
    std::string tok;
    Word out;
    while (in >> tok) {
      int p = 1;
      auto caret = tok.find('^');
      std::string name = tok.substr(0, caret);
      if (caret != std::string::npos) p = std::stoi(tok.substr(caret + 1));
      int idx = -1;
      for (std::size_t i = 0; i < generators.size(); ++i)
        if (generators[i] == name) idx = static_cast<int>(i);
      if (idx < 0) throw CharvarError("unknown generator symbol '" + name + "'");
      Word one{idx + 1};
      Word wp = word_power(one, p);
      out.insert(out.end(), wp.begin(), wp.end());
    }
    return out;
  }
  std::string format_word(const Word& w) const {
    std::string s;
    for (int x : w) s += (s.empty() ? "" : " ") + generators[static_cast<std::size_t>(std::abs(x) - 1)] + (x < 0 ? "^-1" : "");
    return s;
  }
};

namespace detail {

inline SurfaceModel torus_model(const DecoratedGraph& g) {
  SurfaceModel m;
  m.name = "torus";
  m.generators = {"a", "b"};
  int e = g.edge_index("e"), f = g.edge_index("f");
  auto base = [e, f](const std::vector<double>& tau) {
    auto P = pants_rep(tau[e], tau[e], tau[f]);
    Quat X = P[0], Y = P[1];
    return std::make_pair(X, conj_to(qinv(X), Y));
  };
  m.build = [=](const std::vector<double>& tau, const std::vector<double>& th) {
    auto [X, B0] = base(tau);
    return std::vector<Quat>{X, B0 * qexp(th[e], qaxis(X))};
  };
  m.tangent = [=](const std::vector<double>& tau, const std::vector<double>& th, int edge) {
    auto gens = m.build(tau, th);
    std::vector<Quat> d(2, Quat(0, 0, 0, 0));
    if (edge == e) d[1] = gens[1] * qpure(qaxis(gens[0]));
    return d;
  };
  m.words["C(e)"] = m.parse_word("a");
  m.words["D(e)"] = m.parse_word("b");
  Word a = m.parse_word("a"), b = m.parse_word("b");
  m.twist_images = [=](int edge, int k) {
    std::map<int, Word> im;
    if (edge == e) im[1] = cat({b, word_power(a, k)});
    return im;
  };
  return m;
}

// x1, x2 around legs a, d at v1; x3, x4 around legs c, b at v2.
inline SurfaceModel sphere_model(const DecoratedGraph& g) {
  SurfaceModel m;
  m.name = "sphere";
  m.generators = {"x1", "x2", "x3", "x4"};
  int e = g.edge_index("e"), a = g.edge_index("a"), b = g.edge_index("b"), c = g.edge_index("c"),
      d = g.edge_index("d");
  m.relations.push_back(m.parse_word("x1 x2 x3 x4"));
  m.build = [=](const std::vector<double>& tau, const std::vector<double>& th) {
    auto P1 = pants_rep(tau[a], tau[d], tau[e]);
    Quat X1 = P1[0], X2 = P1[1];
    Quat Cc = qinv(X1 * X2);
    auto P2 = pants_rep(tau[c], tau[b], tau[e]);
    Quat gq = conj_to(qinv(P2[2]), Cc);
    Quat h = qexp(th[e], qaxis(X1 * X2)) * gq;
    return std::vector<Quat>{X1, X2, h * P2[0] * qinv(h), h * P2[1] * qinv(h)};
  };
  m.tangent = [=](const std::vector<double>& tau, const std::vector<double>& th, int edge) {
    auto gens = m.build(tau, th);
    std::vector<Quat> dv(4, Quat(0, 0, 0, 0));
    if (edge != e) return dv;
    Quat n = qpure(qaxis(gens[0] * gens[1]));
    for (int i : {2, 3}) dv[static_cast<std::size_t>(i)] = qadd(n * gens[static_cast<std::size_t>(i)], qscale(-1.0, gens[static_cast<std::size_t>(i)] * n));
    return dv;
  };
  m.words["C(e)"] = m.parse_word("x1 x2");
  m.words["D(e)"] = m.parse_word("x2 x3");
  Word cw = m.parse_word("x1 x2"), x3 = m.parse_word("x3"), x4 = m.parse_word("x4");
  m.twist_images = [=](int edge, int k) {
    std::map<int, Word> im;
    if (edge == e) {
      im[2] = cat({word_power(cw, k), x3, word_power(cw, -k)});
      im[3] = cat({word_power(cw, k), x4, word_power(cw, -k)});
    }
    return im;
  };
  return m;
}

// Graph-of-groups generators: x1 x2 x3 x4 = 1, t2 x3 t2^-1 x1 = 1, t3 x4 t3^-1 x2 = 1.
inline SurfaceModel genus2_model(const DecoratedGraph& g) {
  SurfaceModel m;
  m.name = "genus2";
  m.generators = {"x1", "x2", "x3", "x4", "t2", "t3"};
  int e1 = g.edge_index("e1"), e2 = g.edge_index("e2"), e3 = g.edge_index("e3");
  m.relations.push_back(m.parse_word("x1 x2 x3 x4"));
  m.relations.push_back(m.parse_word("t2 x3 t2^-1 x1"));
  m.relations.push_back(m.parse_word("t3 x4 t3^-1 x2"));
  m.build = [=](const std::vector<double>& tau, const std::vector<double>& th) {
    auto P1 = pants_rep(tau[e2], tau[e3], tau[e1]);
    Quat X1 = P1[0], X2 = P1[1];
    Quat C = qinv(X1 * X2);
    auto P2 = pants_rep(tau[e2], tau[e3], tau[e1]);
    Quat gq = conj_to(qinv(P2[2]), C);
    Quat X3 = gq * P2[0] * qinv(gq), X4 = gq * P2[1] * qinv(gq);
    Quat T2 = conj_to(X3, qinv(X1)), T3 = conj_to(X4, qinv(X2));
    Quat h = qexp(th[e1], qaxis(X1 * X2));
    Quat X3t = h * X3 * qinv(h), X4t = h * X4 * qinv(h);
    Quat T2t = T2 * qexp(th[e2], qaxis(X3)) * qinv(h);
    Quat T3t = T3 * qexp(th[e3], qaxis(X4)) * qinv(h);
    return std::vector<Quat>{X1, X2, X3t, X4t, T2t, T3t};
  };
  m.tangent = [=](const std::vector<double>& tau, const std::vector<double>& th, int edge) {
    auto gs = m.build(tau, th);
    std::vector<Quat> dv(6, Quat(0, 0, 0, 0));
    if (edge == e1) {
      Quat n = qpure(qaxis(gs[0] * gs[1]));
      dv[2] = qadd(n * gs[2], qscale(-1.0, gs[2] * n));
      dv[3] = qadd(n * gs[3], qscale(-1.0, gs[3] * n));
      dv[4] = qscale(-1.0, gs[4] * n);
      dv[5] = qscale(-1.0, gs[5] * n);
    } else if (edge == e2) {
      dv[4] = gs[4] * qpure(qaxis(gs[2]));
    } else if (edge == e3) {
      dv[5] = gs[5] * qpure(qaxis(gs[3]));
    }
    return dv;
  };
  m.words["C(e1)"] = m.parse_word("x1 x2");
  m.words["C(e2)"] = m.parse_word("x1");
  m.words["C(e3)"] = m.parse_word("x2");
  m.words["D(e1)"] = m.parse_word("x2 x3");
  m.words["D(e2)"] = m.parse_word("x3 x4 t2 x4 t2^-1");
  m.words["D(e3)"] = m.parse_word("x1 t3 x1 x2 t3^-1");
  m.words["Z(e1,e2)"] = m.parse_word("t2");
  m.words["Z(e1,e3)"] = m.parse_word("t3");
  m.words["Z(e2,e3)"] = m.parse_word("t2 t3^-1");
  Word cw = m.parse_word("x1 x2");
  Word x3 = m.parse_word("x3"), x4 = m.parse_word("x4"), t2 = m.parse_word("t2"), t3 = m.parse_word("t3");
  m.twist_images = [=](int edge, int k) {
    std::map<int, Word> im;
    if (edge == e1) {
      im[2] = cat({word_power(cw, k), x3, word_power(cw, -k)});
      im[3] = cat({word_power(cw, k), x4, word_power(cw, -k)});
      im[4] = cat({t2, word_power(cw, -k)});
      im[5] = cat({t3, word_power(cw, -k)});
    } else if (edge == e2) {
      im[4] = cat({t2, word_power(x3, k)});
    } else if (edge == e3) {
      im[5] = cat({t3, word_power(x4, k)});
    }
    return im;
  };
  return m;
}

}  // namespace detail

inline SurfaceModel surface_model(const std::string& name, const DecoratedGraph& g) {
  if (name == "torus") return detail::torus_model(g);
  if (name == "sphere") return detail::sphere_model(g);
  if (name == "genus2") return detail::genus2_model(g);
  throw CharvarError("no character-variety model for surface '" + name + "'");
}

// Canonical key of a simple curve in the word table.
inline std::string word_key(const DecoratedGraph& g, const Curve& c) {
  switch (c.kind) {
    case CurveKind::Decomp:
      return "C(" + g.edges[c.edge].id + ")";
    case CurveKind::LoopD:
    case CurveKind::JoinD:
      return "D(" + g.edges[c.edge].id + ")";
    case CurveKind::Cycle: {
      std::vector<std::string> ids;
      for (int e : c.cycle_edges) ids.push_back(g.edges[e].id);
      std::sort(ids.begin(), ids.end());
      std::string s = "Z(";
      for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? "," : "") + ids[i];
      return s + ")";
    }
    default:
      return c.id;
  }
}

// One word per factor; the trace observable of the curve is the product of their trace functions.
inline std::vector<Word> curve_words(const SurfaceModel& m, const DecoratedGraph& g, const Curve& c) {
  switch (c.kind) {
    case CurveKind::Twist: {
      auto inner = curve_words(m, g, *c.parts[0]);
      auto im = m.twist_images(c.edge, c.twist);
      for (auto& w : inner) w = substitute(w, im);
      return inner;
    }
    case CurveKind::Union:
    case CurveKind::Product: {
      std::vector<Word> out;
      for (const auto& p : c.parts) {
        auto w = curve_words(m, g, *p);
        out.insert(out.end(), w.begin(), w.end());
      }
      return out;
    }
    default: {
      auto it = m.words.find(word_key(g, c));
      if (it == m.words.end()) throw CharvarError("curve '" + c.id + "' is not in the word table of " + m.name);
      return {it->second};
    }
  }
}

// Representation family R(tau, theta) with calibrated angle origins and a per-character shift.
class CharVariety {
 public:
  CharVariety(const DecoratedGraph& g, std::string name) : g_(g), model_(surface_model(name, g)) {
    for (int e : g_.internal_edges) duals_.push_back(curve_words(model_, g_, *make_dual(g_, e))[0]);
    tau_ref_ = leg_taus(g_);
    // generic point: the symmetric point 1/2 can kill the theta-dependence of f_{D_e}
    double x = 0.45;
    for (int e : g_.internal_edges) tau_ref_[static_cast<std::size_t>(e)] = (x += 0.01);
    if (!in_U(tau_ref_, g_, 1e-6)) throw CharvarError("reference point for the angle gauge is outside U");
  }

  const SurfaceModel& model() const { return model_; }
  const DecoratedGraph& graph() const { return g_; }

  // Per-edge maximizer of f_{D_e} with the other raw angles at zero; defined mod 2pi/k.
  std::vector<double> raw_origins(const std::vector<double>& tau) const {
    std::vector<double> o(g_.edges.size(), 0.0);
    for (std::size_t i = 0; i < g_.internal_edges.size(); ++i) {
      int e = g_.internal_edges[i];
      int k = period_div(e);
      const int N = 8;
      double A = 0, B = 0;
      for (int j = 0; j < N; ++j) {
        std::vector<double> th(g_.edges.size(), 0.0);
        double x = 2.0 * kPi * j / (N * k);
        th[static_cast<std::size_t>(e)] = x;
        double f = trace_fn(duals_[i], model_.build(tau, th));
        A += f * std::cos(k * x);
        B += f * std::sin(k * x);
      }
      if (std::hypot(A, B) < 1e-9 * N) throw CharvarError("f_{D_e} does not depend on theta_e here; origin undefined");
      o[static_cast<std::size_t>(e)] = std::atan2(B, A) / k;
    }
    return o;
  }

  // Origins continued from the reference point along the segment to tau, so the gauge is frozen.
  // Near tau_e = tau_f = 1/2 the origin of the third edge turns fast, so steps are halved until
  // each moves it by under a quarter period. The lift depends on the path.
  std::vector<double> origins(const std::vector<double>& tau) const {
    const int N = 32, max_depth = 14;
    auto at = [&](double s) {
      std::vector<double> t(tau.size());
      for (std::size_t e = 0; e < tau.size(); ++e) t[e] = tau_ref_[e] + (tau[e] - tau_ref_[e]) * s;
      return raw_origins(t);
    };
    auto prev = raw_origins(tau_ref_);
    std::function<void(double, double, int)> walk = [&](double s0, double s1, int depth) {
      auto cur = at(s1);
      bool ok = true;
      for (int e : g_.internal_edges) {
        auto ue = static_cast<std::size_t>(e);
        double per = 2.0 * kPi / period_div(e);
        ok &= std::fabs(std::remainder(cur[ue] - prev[ue], per)) <= 0.25 * per;
      }
      if (!ok) {
        if (depth >= max_depth) throw CharvarError("angle origin continuation lost track");
        walk(s0, 0.5 * (s0 + s1), depth + 1);
        walk(0.5 * (s0 + s1), s1, depth + 1);
        return;
      }
      for (int e : g_.internal_edges) {
        auto ue = static_cast<std::size_t>(e);
        double per = 2.0 * kPi / period_div(e);
        cur[ue] = prev[ue] + std::remainder(cur[ue] - prev[ue], per);
      }
      prev = cur;
    };
    for (int s = 1; s <= N; ++s) walk(static_cast<double>(s - 1) / N, static_cast<double>(s) / N, 0);
    return prev;
  }

  const std::vector<double>& reference_tau() const { return tau_ref_; }

  void check_tau(const std::vector<double>& tau) const {
    if (!in_U(tau, g_, 1e-6)) throw CharvarError("tau is outside U or within 1e-6 of its boundary");
  }

  // Generator images of R(tau, theta + shift) with calibrated origins.
  std::vector<Quat> rep(const std::vector<double>& tau, const std::vector<double>& theta,
                        const std::vector<double>& shift = {}) const {
    check_tau(tau);
    auto o = origins(tau);
    std::vector<double> th(g_.edges.size(), 0.0);
    for (int e : g_.internal_edges) {
      auto ue = static_cast<std::size_t>(e);
      th[ue] = o[ue] + (ue < theta.size() ? theta[ue] : 0.0) + (ue < shift.size() ? shift[ue] : 0.0);
    }
    return model_.build(tau, th);
  }

  std::vector<Quat> rep_tangent(const std::vector<double>& tau, const std::vector<double>& theta, int e,
                                const std::vector<double>& shift = {}) const {
    auto o = origins(tau);
    std::vector<double> th(g_.edges.size(), 0.0);
    for (int f : g_.internal_edges) {
      auto uf = static_cast<std::size_t>(f);
      th[uf] = o[uf] + (uf < theta.size() ? theta[uf] : 0.0) + (uf < shift.size() ? shift[uf] : 0.0);
    }
    return model_.tangent(tau, th, e);
  }

  double observable(const std::vector<Word>& ws, const std::vector<Quat>& gens) const {
    double p = 1.0;
    for (const auto& w : ws) p *= trace_fn(w, gens);
    return p;
  }

  double relation_residual(const std::vector<Quat>& gens) const {
    double r = 0.0;
    for (const auto& w : model_.relations) {
      Quat q = eval_word(w, gens);
      r = std::max(r, (q.coeffs() - Quat(1, 0, 0, 0).coeffs()).norm());
    }
    for (const auto& q : gens) r = std::max(r, std::fabs(q.norm() - 1.0));
    return r;
  }

  // Largest commutator defect over generator pairs.
  double noncommutativity(const std::vector<Quat>& gens) const {
    double m = 0.0;
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t j = i + 1; j < gens.size(); ++j)
        m = std::max(m, ((gens[i] * gens[j]).coeffs() - (gens[j] * gens[i]).coeffs()).norm());
    return m;
  }

 private:
  const DecoratedGraph& g_;
  SurfaceModel model_;
  std::vector<Word> duals_;
  std::vector<double> tau_ref_;

  int period_div(int e) const { return g_.edges[static_cast<std::size_t>(e)].kind == EdgeKind::Loop ? 1 : 2; }
};

// Shift n in {0,1}^E (angle shift pi*n) turning the character q into q' = q + l:
// sum over the edges of each basis cycle of n_e equals l on that class.
inline std::vector<int> origin_shift(const DecoratedGraph& g, const Character& from, const Character& to) {
  std::uint64_t lin = 0;
  for (int i = 0; i < g.dim(); ++i) {
    RelH1Class b{std::uint64_t{1} << i};
    if (from.q(g, b) != to.q(g, b)) lin |= std::uint64_t{1} << i;
  }
  const auto& E = g.internal_edges;
  for (std::uint64_t n = 0; n < (std::uint64_t{1} << E.size()); ++n) {
    bool ok = true;
    for (int i = 0; i < g.dim() && ok; ++i) {
      int s = 0;
      for (std::size_t j = 0; j < E.size(); ++j)
        if ((n >> j & 1u) && (g.basis_cycles[static_cast<std::size_t>(i)] >> E[j] & 1u)) ++s;
      ok = (s % 2) == static_cast<int>(lin >> i & 1u);
    }
    if (ok) {
      std::vector<int> out(g.edges.size(), 0);
      for (std::size_t j = 0; j < E.size(); ++j)
        if (n >> j & 1u) out[static_cast<std::size_t>(E[j])] = 1;
      return out;
    }
  }
  throw CharvarError("origin_shift: no lattice vector matches");
}

struct AngleLattice {
  std::vector<std::vector<double>> lambda;        // 2 pi u_e and pi (u_e + u_f + u_g)
  std::vector<std::vector<double>> lambda_prime;  // pi u_e
};

inline AngleLattice angle_lattice(const DecoratedGraph& g) {
  AngleLattice L;
  for (int e : g.internal_edges) {
    std::vector<double> v(g.edges.size(), 0.0), w(g.edges.size(), 0.0);
    v[static_cast<std::size_t>(e)] = 2 * kPi;
    w[static_cast<std::size_t>(e)] = kPi;
    L.lambda.push_back(v);
    L.lambda_prime.push_back(w);
  }
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    if (g.vertices[v].boundary) continue;
    std::vector<double> x(g.edges.size(), 0.0);
    for (int h : g.vertices[v].cyclic) {
      int e = g.halfedges[h].edge;
      if (g.is_internal_edge(e)) x[static_cast<std::size_t>(e)] += kPi;
    }
    L.lambda.push_back(x);
  }
  return L;
}

inline nlohmann::json rep_json(const SurfaceModel& m, const std::vector<Quat>& gens) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < gens.size(); ++i)
    j[m.generators[i]] = {gens[i].w(), gens[i].x(), gens[i].y(), gens[i].z()};
  return j;
}

// Observable on (tau, theta) coordinates.
using Observable = std::function<double(const std::vector<double>&, const std::vector<double>&)>;

// {F, G} = sum_e dF/dtau_e dG/dtheta_e - dF/dtheta_e dG/dtau_e by central differences.
inline double poisson_bracket(const DecoratedGraph& g, const Observable& F, const Observable& G,
                              const std::vector<double>& tau, const std::vector<double>& theta, double step) {
  auto d = [&](const Observable& H, int e, bool in_tau) {
    std::vector<double> tp = tau, tm = tau, qp = theta, qm = theta;
    auto ue = static_cast<std::size_t>(e);
    if (in_tau) {
      tp[ue] += step;
      tm[ue] -= step;
    } else {
      qp[ue] += step;
      qm[ue] -= step;
    }
    return (H(tp, qp) - H(tm, qm)) / (2 * step);
  };
  double s = 0.0;
  for (int e : g.internal_edges) s += d(F, e, true) * d(G, e, false) - d(F, e, false) * d(G, e, true);
  return s;
}

// f_w o R with the given angle shift.
inline Observable trace_observable(const CharVariety& cv, const Word& w, const std::vector<double>& shift = {}) {
  return [&cv, w, shift](const std::vector<double>& tau, const std::vector<double>& theta) {
    return trace_fn(w, cv.rep(tau, theta, shift));
  };
}

// Action h_{C_e} = arccos(-f_{C_e}/2)/pi, which recovers tau_e.
inline Observable action_observable(const CharVariety& cv, int e) {
  Word w = curve_words(cv.model(), cv.graph(), *make_decomp(cv.graph(), e))[0];
  return [&cv, w](const std::vector<double>& tau, const std::vector<double>& theta) {
    double x = std::clamp(-trace_fn(w, cv.rep(tau, theta)) / 2.0, -1.0, 1.0);
    return std::acos(x) / kPi;
  };
}

// Exact d/dtheta_e of f_w o R from the generator tangents.
inline double trace_dtheta(const CharVariety& cv, const Word& w, const std::vector<double>& tau,
                           const std::vector<double>& theta, int e, const std::vector<double>& shift = {}) {
  auto gens = cv.rep(tau, theta, shift);
  auto dg = cv.rep_tangent(tau, theta, e, shift);
  return -2.0 * eval_word_tangent(w, gens, dg).w();
}

// Random reduced word over the generators.
inline Word random_word(std::mt19937_64& rng, int ngens, int maxlen) {
  std::uniform_int_distribution<int> len(1, maxlen), gen(1, ngens), sgn(0, 1);
  Word w;
  int n = len(rng);
  while (static_cast<int>(w.size()) < n) {
    int x = gen(rng) * (sgn(rng) ? 1 : -1);
    if (!w.empty() && w.back() == -x) continue;
    w.push_back(x);
  }
  return w;
}

}  // namespace curveops
