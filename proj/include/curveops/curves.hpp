// Copyright 2026 The curveops Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "coloring.hpp"
#include "graph.hpp"

namespace curveops {

struct CurveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A configuration the fusion engine does not reduce (leg exchange and friends).
struct CapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class CurveKind { Decomp, LoopD, JoinD, Cycle, Twist, Union, Product };

// Strand passing through vertex v from edge-end h_in to edge-end h_out.
struct Passage {
  int v = -1;
  int h_in = -1;
  int h_out = -1;
};

struct Curve;
using CurvePtr = std::shared_ptr<const Curve>;

struct Curve {
  CurveKind kind = CurveKind::Decomp;
  int edge = -1;
  int twist = 0;
  std::vector<Passage> passages;
  std::vector<int> cycle_edges;
  std::vector<CurvePtr> parts;  // Twist: one child. Union, Product: factors, rightmost acts first.
  std::string id;
};

inline CurvePtr make_decomp(const DecoratedGraph& g, int e) {
  if (!g.is_internal_edge(e)) throw CurveError("C(" + g.edges[e].id + "): edge is a boundary leg");
  auto c = std::make_shared<Curve>();
  c->kind = CurveKind::Decomp;
  c->edge = e;
  c->id = "C(" + g.edges[e].id + ")";
  return c;
}

// Simple cycle through the listed internal edges, traversed in order starting along the first edge's ends[0] -> ends[1].
inline CurvePtr make_cycle(const DecoratedGraph& g, const std::vector<int>& es) {
  if (es.empty()) throw CurveError("empty cycle");
  for (int e : es)
    if (!g.is_internal_edge(e)) throw CurveError("cycle through boundary leg '" + g.edges[e].id + "'");
  for (std::size_t i = 0; i < es.size(); ++i)
    for (std::size_t j = i + 1; j < es.size(); ++j)
      if (es[i] == es[j]) throw CurveError("cycle repeats edge '" + g.edges[es[i]].id + "'");
  auto c = std::make_shared<Curve>();
  c->kind = CurveKind::Cycle;
  c->cycle_edges = es;
  int arrive = g.edges[es[0]].h[1];
  std::vector<int> seen_v;
  for (std::size_t i = 0; i < es.size(); ++i) {
    int next_e = es[(i + 1) % es.size()];
    int v = g.halfedges[arrive].vertex;
    int out = -1;
    if (i + 1 == es.size()) {
      out = g.edges[es[0]].h[0];
      if (g.halfedges[out].vertex != v) throw CurveError("edges do not close into a cycle");
    } else {
      for (int k = 0; k < 2; ++k)
        if (g.halfedges[g.edges[next_e].h[k]].vertex == v && g.edges[next_e].h[k] != arrive) out = g.edges[next_e].h[k];
      if (out < 0) throw CurveError("edges '" + g.edges[es[i]].id + "' and '" + g.edges[next_e].id + "' are not adjacent");
    }
    for (int w : seen_v)
      if (w == v) throw CurveError("cycle passes a vertex twice");
    seen_v.push_back(v);
    c->passages.push_back({v, arrive, out});
    arrive = g.other(out);
  }
  std::string id = "Z(";
  for (std::size_t i = 0; i < es.size(); ++i) id += (i ? "," : "") + g.edges[es[i]].id;
  c->id = id + ")";
  return c;
}

inline CurvePtr make_dual(const DecoratedGraph& g, int e) {
  if (!g.is_internal_edge(e)) throw CurveError("D(" + g.edges[e].id + "): edge is a boundary leg");
  auto c = std::make_shared<Curve>();
  c->edge = e;
  c->id = "D(" + g.edges[e].id + ")";
  if (g.edges[e].kind == EdgeKind::Loop) {
    c->kind = CurveKind::LoopD;
    c->cycle_edges = {e};
    c->passages.push_back({g.halfedges[g.edges[e].h[1]].vertex, g.edges[e].h[1], g.edges[e].h[0]});
  } else {
    c->kind = CurveKind::JoinD;
  }
  return c;
}

inline CurvePtr make_twist(const DecoratedGraph& g, int e, int m, CurvePtr inner) {
  if (!g.is_internal_edge(e)) throw CurveError("twist along boundary leg '" + g.edges[e].id + "'");
  if (m == 0) return inner;
  if (inner->kind == CurveKind::Twist && inner->edge == e) return make_twist(g, e, m + inner->twist, inner->parts[0]);
  auto c = std::make_shared<Curve>();
  c->kind = CurveKind::Twist;
  c->edge = e;
  c->twist = m;
  c->parts = {inner};
  c->id = "tw(" + g.edges[e].id + "," + std::to_string(m) + "," + inner->id + ")";
  return c;
}

inline CurvePtr make_product(std::vector<CurvePtr> parts) {
  if (parts.size() == 1) return parts[0];
  auto c = std::make_shared<Curve>();
  c->kind = CurveKind::Product;
  c->parts = std::move(parts);
  std::string id;
  for (std::size_t i = 0; i < c->parts.size(); ++i) id += (i ? "*" : "") + c->parts[i]->id;
  c->id = id;
  return c;
}

std::vector<int> intersections(const DecoratedGraph& g, const Curve& c);

// Disjoint union. Components must not cross the same decomposition curve unless they are parallel copies.
inline CurvePtr make_union(const DecoratedGraph& g, std::vector<CurvePtr> parts) {
  if (parts.empty()) throw CurveError("empty multicurve");
  if (parts.size() == 1) return parts[0];
  int crossing = 0;
  for (const auto& p : parts) {
    auto I = intersections(g, *p);
    bool any = false;
    for (int x : I) any |= x != 0;
    crossing += any ? 1 : 0;
  }
  if (crossing > 1) {
    // only parallel copies of one crossing curve are known to be disjoint
    std::string first;
    for (const auto& p : parts) {
      auto I = intersections(g, *p);
      bool any = false;
      for (int x : I) any |= x != 0;
      if (!any) continue;
      if (first.empty())
        first = p->id;
      else if (p->id != first)
        throw CurveError("components '" + first + "' and '" + p->id + "' may intersect; use '*' for products");
    }
  }
  for (const auto& p : parts) {
    if (p->kind != CurveKind::Decomp) continue;
    for (const auto& q : parts) {
      if (q.get() == p.get()) continue;
      if (intersections(g, *q)[p->edge] != 0)
        throw CurveError("'" + p->id + "' intersects '" + q->id + "'");
    }
  }
  auto c = std::make_shared<Curve>();
  c->kind = CurveKind::Union;
  c->parts = std::move(parts);
  std::string id = "U(";
  for (std::size_t i = 0; i < c->parts.size(); ++i) id += (i ? "," : "") + c->parts[i]->id;
  c->id = id + ")";
  return c;
}

inline CurvePtr make_power(const DecoratedGraph& g, CurvePtr base, int p) {
  if (p < 1) throw CurveError("power must be >= 1");
  if (p == 1) return base;
  std::vector<CurvePtr> parts(static_cast<std::size_t>(p), base);
  auto u = std::make_shared<Curve>(*make_union(g, parts));
  u->id = base->id + "^" + std::to_string(p);
  return u;
}

inline std::vector<int> intersections(const DecoratedGraph& g, const Curve& c) {
  std::vector<int> I(g.edges.size(), 0);
  switch (c.kind) {
    case CurveKind::Decomp:
      break;
    case CurveKind::LoopD:
      I[c.edge] = 1;
      break;
    case CurveKind::JoinD:
      I[c.edge] = 2;
      break;
    case CurveKind::Cycle:
      for (int e : c.cycle_edges) I[e] += 1;
      break;
    case CurveKind::Twist:
      return intersections(g, *c.parts[0]);
    case CurveKind::Union:
    case CurveKind::Product:
      for (const auto& p : c.parts) {
        auto J = intersections(g, *p);
        for (std::size_t e = 0; e < I.size(); ++e) I[e] += J[e];
      }
      break;
  }
  return I;
}

inline int component_count(const Curve& c) {
  switch (c.kind) {
    case CurveKind::Twist:
      return component_count(*c.parts[0]);
    case CurveKind::Union:
    case CurveKind::Product: {
      int n = 0;
      for (const auto& p : c.parts) n += component_count(*p);
      return n;
    }
    default:
      return 1;
  }
}

// Canonical side of a strand at edge-end h for a passage: +1 left, -1 right, w.r.t. the edge's ends[0] -> ends[1].
inline int canonical_side(const DecoratedGraph& g, const Passage& p, int h) {
  int outward;
  if (g.next(p.h_in) == p.h_out)
    outward = h == p.h_in ? +1 : -1;
  else
    outward = h == p.h_in ? -1 : +1;
  return g.halfedges[h].end == 0 ? outward : -outward;
}

// Per traversed edge of a cycle: 0 no switch, +1 left-to-right switch, -1 right-to-left switch.
inline std::map<int, int> cycle_switches(const DecoratedGraph& g, const Curve& c) {
  std::map<int, int> out;
  const auto& ps = c.passages;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const Passage& a = ps[i];
    const Passage& b = ps[(i + 1) % ps.size()];
    int h_out = a.h_out, h_in = b.h_in;
    int e = g.halfedges[h_out].edge;
    int s_out = canonical_side(g, a, h_out), s_in = canonical_side(g, b, h_in);
    int s0 = g.halfedges[h_out].end == 0 ? s_out : s_in;
    int s1 = g.halfedges[h_out].end == 0 ? s_in : s_out;
    out[e] = s0 == s1 ? 0 : (s0 > 0 ? +1 : -1);
  }
  return out;
}

inline std::uint64_t switch_mask(const DecoratedGraph& g, const Curve& c) {
  switch (c.kind) {
    case CurveKind::Cycle:
    case CurveKind::LoopD: {
      std::uint64_t m = 0;
      for (auto [e, s] : cycle_switches(g, c))
        if (s != 0) m |= std::uint64_t{1} << e;
      return m;
    }
    case CurveKind::Twist:
      return switch_mask(g, *c.parts[0]);
    case CurveKind::Union:
    case CurveKind::Product: {
      std::uint64_t m = 0;
      for (const auto& p : c.parts) m ^= switch_mask(g, *p);
      return m;
    }
    default:
      return 0;
  }
}

inline RelH1Class project_class(const DecoratedGraph& g, const Curve& c) {
  switch (c.kind) {
    case CurveKind::LoopD:
    case CurveKind::Cycle: {
      std::uint64_t m = 0;
      for (int e : c.cycle_edges) m ^= std::uint64_t{1} << e;
      return g.class_of_cycle(m);
    }
    case CurveKind::Twist:
      return project_class(g, *c.parts[0]);
    case CurveKind::Union:
    case CurveKind::Product: {
      RelH1Class s;
      for (const auto& p : c.parts) s = s + project_class(g, *p);
      return s;
    }
    default:
      return {};
  }
}

inline int cocycle_sign(const Coloring& col, const DecoratedGraph& g, const Curve& c) {
  std::uint64_t m = switch_mask(g, c);
  int s = 1;
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    if ((m >> e & 1u) && (col[e] - 1) % 2 != 0) s = -s;
  return s;
}

// Value of the cochain on the boundary of the hexagons at vertex v.
inline int hexagon_sign(const Coloring& col, const DecoratedGraph& g, int v) {
  int s = 1;
  for (int h : g.vertices[v].cyclic)
    if ((col[g.halfedges[h].edge] - 1) % 2 != 0) s = -s;
  return s;
}

inline int intersection_sign(const DecoratedGraph& g, const Curve& a, const Curve& b) {
  std::uint64_t m = switch_mask(g, a);
  auto I = intersections(g, b);
  int s = 1;
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    if ((m >> e & 1u) && I[e] % 2 != 0) s = -s;
  return s;
}

// ---- curve ids: C(e) D(e) Z(e1,e2,..) tw(e,m,X) U(X,Y,..) X*Y X^p (X)

class CurveParser {
 public:
  CurveParser(const DecoratedGraph& g, std::string s) : g_(g), s_(std::move(s)) {}

  CurvePtr parse() {
    auto c = expr();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return c;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw CurveError("curve id '" + s_ + "' at " + std::to_string(pos_) + ": " + msg);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char ch) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char ch) {
    if (!eat(ch)) fail(std::string("expected '") + ch + "'");
  }
  std::string name() {
    skip();
    std::size_t b = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                                s_[pos_] == '-' || s_[pos_] == '.'))
      ++pos_;
    if (b == pos_) fail("expected a name");
    return s_.substr(b, pos_ - b);
  }
  int integer() {
    skip();
    std::size_t b = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (b == pos_ || (pos_ == b + 1 && !std::isdigit(static_cast<unsigned char>(s_[b])))) fail("expected an integer");
    return std::stoi(s_.substr(b, pos_ - b));
  }
  int edge() {
    std::string n = name();
    try {
      return g_.edge_index(n);
    } catch (const GraphError&) {
      fail("unknown edge '" + n + "'");
    }
  }
  CurvePtr expr() {
    std::vector<CurvePtr> f{term()};
    while (eat('*')) f.push_back(term());
    return make_product(f);
  }
  CurvePtr term() {
    CurvePtr a = atom();
    if (eat('^')) a = make_power(g_, a, integer());
    return a;
  }
  CurvePtr atom() {
    if (eat('(')) {
      auto c = expr();
      expect(')');
      return c;
    }
    std::string head = name();
    expect('(');
    CurvePtr out;
    if (head == "C") {
      out = make_decomp(g_, edge());
    } else if (head == "D") {
      out = make_dual(g_, edge());
    } else if (head == "Z") {
      std::vector<int> es{edge()};
      while (eat(',')) es.push_back(edge());
      out = make_cycle(g_, es);
    } else if (head == "tw") {
      int e = edge();
      expect(',');
      int m = integer();
      expect(',');
      out = make_twist(g_, e, m, expr());
    } else if (head == "U") {
      std::vector<CurvePtr> ps{expr()};
      while (eat(',')) ps.push_back(expr());
      out = make_union(g_, ps);
    } else {
      fail("unknown curve constructor '" + head + "'");
    }
    expect(')');
    return out;
  }

  const DecoratedGraph& g_;
  std::string s_;
  std::size_t pos_ = 0;
};

inline CurvePtr parse_curve(const DecoratedGraph& g, const std::string& id) { return CurveParser(g, id).parse(); }

// ---- raw Dehn data

struct PantsArcs {
  int opposite[3] = {0, 0, 0};  // arcs joining the two circles other than slot s
  int self[3] = {0, 0, 0};      // arcs from slot s back to itself
};

struct AnnulusData {
  int pattern = 1;  // 1 parallel copies, 2 crossing, 3 crossing with a side switch
  int count = 0;
  int twist = 0;
};

struct MulticurveSpec {
  std::map<int, PantsArcs> pants;  // by vertex
  std::map<int, AnnulusData> annuli;  // by edge

  // Crossings of C_e as seen from the pants at edge-end h.
  int crossings_at(const DecoratedGraph& g, int h) const {
    int v = g.halfedges[h].vertex;
    auto it = pants.find(v);
    if (it == pants.end()) return 0;
    int s = g.slot(h);
    int n = 2 * it->second.self[s];
    for (int k = 0; k < 3; ++k)
      if (k != s) n += it->second.opposite[k];
    return n;
  }
};

inline MulticurveSpec parse_multicurve(const DecoratedGraph& g, const nlohmann::json& j) {
  MulticurveSpec m;
  if (!j.is_object()) throw CurveError("curve data must be an object");
  if (j.contains("pants"))
    for (auto it = j.at("pants").begin(); it != j.at("pants").end(); ++it) {
      int v;
      try {
        v = g.vertex_index(it.key());
      } catch (const GraphError&) {
        throw CurveError("curve data: unknown pants '" + it.key() + "'");
      }
      if (g.vertices[v].boundary) throw CurveError("curve data: '" + it.key() + "' is not a pants vertex");
      PantsArcs a;
      const auto& pj = it.value();
      a.opposite[0] = pj.value("alpha", 0);
      a.opposite[1] = pj.value("beta", 0);
      a.opposite[2] = pj.value("gamma", 0);
      if (pj.contains("self"))
        for (auto s = pj.at("self").begin(); s != pj.at("self").end(); ++s) {
          int slot = std::stoi(s.key());
          if (slot < 0 || slot > 2) throw CurveError("curve data: self slot out of range");
          a.self[slot] = s.value().get<int>();
        }
      for (int k = 0; k < 3; ++k)
        if (a.opposite[k] < 0 || a.self[k] < 0) throw CurveError("curve data: negative arc count");
      m.pants[v] = a;
    }
  if (j.contains("annuli"))
    for (auto it = j.at("annuli").begin(); it != j.at("annuli").end(); ++it) {
      int e;
      try {
        e = g.edge_index(it.key());
      } catch (const GraphError&) {
        throw CurveError("curve data: unknown annulus '" + it.key() + "'");
      }
      if (!g.is_internal_edge(e)) throw CurveError("curve data: annulus on boundary leg '" + it.key() + "'");
      AnnulusData a;
      a.pattern = it.value().value("pattern", 1);
      a.count = it.value().value("count", 0);
      a.twist = it.value().value("twist", 0);
      if (a.pattern < 1 || a.pattern > 3) throw CurveError("curve data: pattern must be 1, 2 or 3");
      if (a.count < 0) throw CurveError("curve data: negative count");
      m.annuli[e] = a;
    }
  // gluing consistency
  for (int e : g.internal_edges) {
    int n0 = m.crossings_at(g, g.edges[e].h[0]), n1 = m.crossings_at(g, g.edges[e].h[1]);
    int na = 0;
    auto it = m.annuli.find(e);
    if (it != m.annuli.end() && it->second.pattern != 1) na = it->second.count;
    if (g.edges[e].kind == EdgeKind::Loop) {
      // both circles of a loop sit in the same pants
      if (n0 != n1 || n0 != na)
        throw CurveError("curve data: crossings of '" + g.edges[e].id + "' disagree (" + std::to_string(n0) + ", " +
                         std::to_string(n1) + ", annulus " + std::to_string(na) + ")");
    } else if (n0 != n1 || n0 != na) {
      throw CurveError("curve data: crossings of '" + g.edges[e].id + "' disagree (" + std::to_string(n0) + ", " +
                       std::to_string(n1) + ", annulus " + std::to_string(na) + ")");
    }
  }
  for (int e : g.leg_edges)
    for (int k = 0; k < 2; ++k)
      if (!g.vertices[g.halfedges[g.edges[e].h[k]].vertex].boundary && m.crossings_at(g, g.edges[e].h[k]) != 0)
        throw CurveError("curve data: arcs end on the boundary circle of leg '" + g.edges[e].id + "'");
  return m;
}

inline MulticurveSpec apply_dehn_twist(const MulticurveSpec& s, int e, int m) {
  MulticurveSpec out = s;
  out.annuli[e].twist += m;
  if (out.annuli[e].count == 0 && out.annuli[e].twist == 0 && s.annuli.find(e) == s.annuli.end()) out.annuli.erase(e);
  return out;
}

inline MulticurveSpec standard_curve(const DecoratedGraph& g, const std::string& kind, int e, int m = 0) {
  if (!g.is_internal_edge(e)) throw CurveError(kind + ": edge '" + g.edges[e].id + "' is a boundary leg");
  MulticurveSpec s;
  if (kind == "C") {
    s.annuli[e] = {1, 1, 0};
    return s;
  }
  if (kind != "D" && kind != "twist") throw CurveError("unknown standard curve kind '" + kind + "'");
  const Edge& E = g.edges[e];
  if (E.kind == EdgeKind::Loop) {
    int v = g.halfedges[E.h[0]].vertex;
    int s0 = g.slot(E.h[0]), s1 = g.slot(E.h[1]);
    s.pants[v].opposite[3 - s0 - s1] = 1;
    s.annuli[e] = {2, 1, 0};
  } else {
    for (int k = 0; k < 2; ++k) s.pants[g.halfedges[E.h[k]].vertex].self[g.slot(E.h[k])] = 1;
    s.annuli[e] = {2, 2, 0};
  }
  if (kind == "twist") s.annuli[e].twist = m;
  return s;
}

// Turns raw Dehn data into an engine curve, or raises CapabilityError.
inline CurvePtr recognize(const DecoratedGraph& g, const MulticurveSpec& s) {
  std::vector<CurvePtr> decomp;
  std::vector<int> crossed;
  for (const auto& [e, a] : s.annuli) {
    if (a.pattern == 1) {
      for (int k = 0; k < a.count; ++k) decomp.push_back(make_decomp(g, e));
    } else if (a.count > 0) {
      crossed.push_back(e);
    }
  }
  CurvePtr main;
  if (!crossed.empty()) {
    if (crossed.size() == 1 && g.edges[crossed[0]].kind == EdgeKind::Loop && s.annuli.at(crossed[0]).count == 1) {
      if (s.annuli.at(crossed[0]).pattern != 2) throw CapabilityError("loop dual curve with a side switch");
      main = make_dual(g, crossed[0]);
    } else if (crossed.size() == 1 && g.edges[crossed[0]].kind == EdgeKind::Joining &&
               s.annuli.at(crossed[0]).count == 2) {
      int e = crossed[0];
      for (int k = 0; k < 2; ++k) {
        int h = g.edges[e].h[k];
        const auto& p = s.pants.at(g.halfedges[h].vertex);
        int sl = g.slot(h);
        for (int q = 0; q < 3; ++q)
          if (p.opposite[q] != 0 || p.self[q] != (q == sl ? 1 : 0))
            throw CapabilityError("two crossings of '" + g.edges[e].id + "' not in dual position");
      }
      if (s.annuli.at(e).pattern != 2) throw CapabilityError("dual curve with a side switch");
      main = make_dual(g, e);
    } else {
      // simple cycle: one arc per visited pants, one crossing per edge
      for (int e : crossed)
        if (s.annuli.at(e).count != 1) throw CapabilityError("multiple crossings of '" + g.edges[e].id + "'");
      for (const auto& [v, p] : s.pants) {
        int tot = 0;
        for (int q = 0; q < 3; ++q) {
          if (p.self[q]) throw CapabilityError("self arcs outside dual position");
          tot += p.opposite[q];
        }
        if (tot > 1) throw CapabilityError("several arcs in pants '" + g.vertices[v].id + "'");
      }
      std::vector<int> order{crossed[0]};
      int at = g.halfedges[g.edges[crossed[0]].h[1]].vertex;
      while (true) {
        int next = -1;
        for (int e : crossed) {
          if (e == order.back()) continue;
          bool used = false;
          for (int u : order) used |= u == e;
          for (int k = 0; k < 2; ++k)
            if (g.halfedges[g.edges[e].h[k]].vertex == at) {
              if (!used) next = e;
            }
        }
        if (next < 0) break;
        order.push_back(next);
        int h = g.halfedges[g.edges[next].h[0]].vertex == at ? g.edges[next].h[1] : g.edges[next].h[0];
        at = g.halfedges[h].vertex;
      }
      if (order.size() != crossed.size()) throw CapabilityError("crossed edges do not form one simple cycle");
      try {
        main = make_cycle(g, order);
      } catch (const CurveError& e) {
        throw CapabilityError(std::string("not a simple cycle: ") + e.what());
      }
      for (const auto& pa : main->passages) {
        int q = 3 - g.slot(pa.h_in) - g.slot(pa.h_out);
        if (!s.pants.count(pa.v) || s.pants.at(pa.v).opposite[q] != 1)
          throw CapabilityError("pants arcs do not match the cycle");
      }
      for (auto [e, sw] : cycle_switches(g, *main)) {
        int want = sw != 0 ? 3 : 2;
        if (s.annuli.at(e).pattern != want)
          throw CapabilityError("annulus pattern of '" + g.edges[e].id + "' needs a leg exchange");
      }
    }
    // twisting along an annulus the curve does not cross is the identity
    for (const auto& [e, a] : s.annuli)
      if (a.twist != 0 && a.pattern != 1) main = make_twist(g, e, a.twist, main);
  } else {
    for (const auto& [v, p] : s.pants)
      for (int q = 0; q < 3; ++q)
        if (p.opposite[q] || p.self[q]) throw CurveError("curve data: pants arcs without annulus crossings");
  }
  std::vector<CurvePtr> parts = decomp;
  if (main) parts.push_back(main);
  if (parts.empty()) throw CurveError("empty multicurve");
  return make_union(g, parts);
}

}  // namespace curveops
