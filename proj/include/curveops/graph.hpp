// Copyright 2026 The curveops Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace curveops {

struct GraphError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class EdgeKind { Loop, Joining, Leg };

struct HalfEdge {
  std::string id;
  int edge = -1;
  int end = 0;  // 0 or 1 in the edge's "ends" list
  int vertex = -1;
};

struct Vertex {
  std::string id;
  bool boundary = false;
  std::vector<int> cyclic;  // half-edge indices, counterclockwise
};

struct Edge {
  std::string id;
  int h[2] = {-1, -1};
  EdgeKind kind = EdgeKind::Joining;
};

// Boundary color of a marked point: r * num / den, or a fixed absolute color.
struct Marked {
  int vertex = -1;
  long num = 0, den = 1;
  std::optional<int> absolute;

  int color_at(int r) const {
    if (absolute) return *absolute;
    if ((static_cast<long>(r) * num) % den != 0)
      throw GraphError("level r=" + std::to_string(r) + " is not a multiple of the marked-point denominator " +
                       std::to_string(den));
    return static_cast<int>(static_cast<long>(r) * num / den);
  }
};

// Z/2 class as coordinates over the cycle basis.
struct RelH1Class {
  std::uint64_t bits = 0;
  friend bool operator==(RelH1Class a, RelH1Class b) { return a.bits == b.bits; }
  friend bool operator<(RelH1Class a, RelH1Class b) { return a.bits < b.bits; }
  friend RelH1Class operator+(RelH1Class a, RelH1Class b) { return {a.bits ^ b.bits}; }
};

inline int popcount64(std::uint64_t x) { return __builtin_popcountll(x); }

class DecoratedGraph {
 public:
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::vector<HalfEdge> halfedges;
  std::vector<Marked> marked;

  int genus = 0;
  int n_marked = 0;
  int ribbon_boundaries = 0;  // boundary circles of the thickened internal graph
  std::vector<int> internal_edges;
  std::vector<int> leg_edges;
  std::vector<int> basis_edges;  // spanning-tree complement edges, one per basis class
  std::vector<std::uint64_t> basis_cycles;  // edge masks of the fundamental cycles
  std::vector<std::vector<int>> form;  // Z/2 intersection matrix on the basis

  int dim() const { return static_cast<int>(basis_edges.size()); }
  int next(int h) const {
    const auto& cyc = vertices[halfedges[h].vertex].cyclic;
    auto it = std::find(cyc.begin(), cyc.end(), h);
    return cyc[(static_cast<std::size_t>(it - cyc.begin()) + 1) % cyc.size()];
  }
  int prev(int h) const {
    const auto& cyc = vertices[halfedges[h].vertex].cyclic;
    auto it = std::find(cyc.begin(), cyc.end(), h);
    std::size_t i = static_cast<std::size_t>(it - cyc.begin());
    return cyc[(i + cyc.size() - 1) % cyc.size()];
  }
  int other(int h) const {
    const auto& e = edges[halfedges[h].edge];
    return e.h[0] == h ? e.h[1] : e.h[0];
  }
  int slot(int h) const {
    const auto& cyc = vertices[halfedges[h].vertex].cyclic;
    return static_cast<int>(std::find(cyc.begin(), cyc.end(), h) - cyc.begin());
  }
  int edge_index(const std::string& id) const {
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (edges[i].id == id) return static_cast<int>(i);
    throw GraphError("unknown edge '" + id + "'");
  }
  int vertex_index(const std::string& id) const {
    for (std::size_t i = 0; i < vertices.size(); ++i)
      if (vertices[i].id == id) return static_cast<int>(i);
    throw GraphError("unknown vertex '" + id + "'");
  }
  bool is_internal_edge(int e) const { return edges[e].kind != EdgeKind::Leg; }
  const Marked* marked_on_leg(int e) const {
    for (const auto& m : marked) {
      const auto& v = vertices[m.vertex];
      if (halfedges[v.cyclic[0]].edge == e) return &m;
    }
    return nullptr;
  }

  // Class of an edge-set cycle (even degree at every vertex).
  RelH1Class class_of_cycle(std::uint64_t mask) const {
    RelH1Class c;
    for (int i = 0; i < dim(); ++i)
      if (mask >> basis_edges[i] & 1u) c.bits |= (std::uint64_t{1} << i);
    return c;
  }
  std::uint64_t cycle_of_class(RelH1Class c) const {
    std::uint64_t m = 0;
    for (int i = 0; i < dim(); ++i)
      if (c.bits >> i & 1u) m ^= basis_cycles[i];
    return m;
  }

  // Mod-2 intersection number of two edge-set cycles, counted at vertices from the ribbon orders.
  int intersection_mod2(std::uint64_t a, std::uint64_t b) const {
    int total = 0;
    for (std::size_t v = 0; v < vertices.size(); ++v) {
      if (vertices[v].boundary) continue;
      const auto& cyc = vertices[v].cyclic;
      std::vector<int> pa, pb;
      for (std::size_t s = 0; s < cyc.size(); ++s) {
        int h = cyc[s];
        int e = halfedges[h].edge;
        bool ina = a >> e & 1u, inb = b >> e & 1u;
        int base = static_cast<int>(s) * 10;
        // along a shared edge the a-strand lies on the canonical left of the b-strand
        int left = halfedges[h].end == 0 ? 1 : -1;
        if (ina && inb) {
          pa.push_back(base + left);
          pb.push_back(base - left);
        } else if (ina) {
          pa.push_back(base);
        } else if (inb) {
          pb.push_back(base);
        }
      }
      if (pa.size() != 2 || pb.size() != 2) continue;
      auto norm = [](int x) { return (x + 30) % 30; };
      int a0 = norm(pa[0]), a1 = norm(pa[1]);
      if (a0 > a1) std::swap(a0, a1);
      int inside = 0;
      for (int x : pb) {
        int y = norm(x);
        if (y > a0 && y < a1) ++inside;
      }
      total += inside % 2;
    }
    return total % 2;
  }

  int pairing(RelH1Class x, RelH1Class y) const {
    int s = 0;
    for (int i = 0; i < dim(); ++i)
      if (x.bits >> i & 1u)
        for (int j = 0; j < dim(); ++j)
          if (y.bits >> j & 1u) s += form[i][j];
    return s % 2;
  }
  int sign(RelH1Class x, RelH1Class y) const { return pairing(x, y) ? -1 : 1; }

  // Stable 64-bit FNV-1a hash of the canonical JSON form.
  std::uint64_t hash() const {
    std::string s = to_json().dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 1099511628211ull;
    }
    return h;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (const auto& v : vertices) {
      nlohmann::json cj = nlohmann::json::array();
      for (int h : v.cyclic) cj.push_back(halfedges[h].id);
      j["vertices"].push_back({{"id", v.id}, {"kind", v.boundary ? "boundary" : "internal"}, {"cyclic", cj}});
    }
    j["edges"] = nlohmann::json::array();
    for (const auto& e : edges)
      j["edges"].push_back({{"id", e.id}, {"ends", {halfedges[e.h[0]].id, halfedges[e.h[1]].id}}});
    j["marked"] = nlohmann::json::array();
    for (const auto& m : marked) {
      nlohmann::json mj{{"vertex", vertices[m.vertex].id}};
      if (m.absolute)
        mj["color"] = *m.absolute;
      else
        mj["color_fraction"] = std::to_string(m.num) + "/" + std::to_string(m.den);
      j["marked"].push_back(mj);
    }
    return j;
  }
};

namespace detail {

inline void parse_fraction(const nlohmann::json& f, long& num, long& den) {
  if (f.is_string()) {
    std::string s = f.get<std::string>();
    auto slash = s.find('/');
    try {
      if (slash != std::string::npos) {
        num = std::stol(s.substr(0, slash));
        den = std::stol(s.substr(slash + 1));
      } else {
        double x = std::stod(s);
        den = 1;
        while (std::fabs(x * den - std::round(x * den)) > 1e-9 && den < 1000000) den *= 10;
        num = std::lround(x * den);
      }
    } catch (const std::exception&) {
      throw GraphError("malformed color_fraction '" + s + "'");
    }
  } else if (f.is_number_integer()) {
    num = f.get<long>();
    den = 1;
  } else if (f.is_number()) {
    double x = f.get<double>();
    den = 1;
    while (std::fabs(x * den - std::round(x * den)) > 1e-9 && den < 1000000) den *= 10;
    num = std::lround(x * den);
  } else {
    throw GraphError("color_fraction must be a string or number");
  }
  if (den <= 0 || num <= 0 || num >= den) throw GraphError("color_fraction must lie strictly between 0 and 1");
  long g = std::gcd(num, den);
  num /= g;
  den /= g;
}

}  // namespace detail

inline DecoratedGraph build_graph(const nlohmann::json& j) {
  DecoratedGraph g;
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
    throw GraphError("graph JSON needs 'vertices' and 'edges'");
  std::map<std::string, int> hid;
  for (const auto& vj : j.at("vertices")) {
    Vertex v;
    v.id = vj.at("id").get<std::string>();
    std::string kind = vj.value("kind", std::string("internal"));
    if (kind != "internal" && kind != "boundary") throw GraphError("vertex '" + v.id + "': unknown kind " + kind);
    v.boundary = kind == "boundary";
    int vi = static_cast<int>(g.vertices.size());
    for (const auto& hj : vj.at("cyclic")) {
      std::string h = hj.get<std::string>();
      if (hid.count(h)) throw GraphError("edge-end '" + h + "' listed twice");
      HalfEdge he;
      he.id = h;
      he.vertex = vi;
      hid[h] = static_cast<int>(g.halfedges.size());
      v.cyclic.push_back(hid[h]);
      g.halfedges.push_back(he);
    }
    std::size_t want = v.boundary ? 1 : 3;
    if (v.cyclic.size() != want)
      throw GraphError("vertex '" + v.id + "' has " + std::to_string(v.cyclic.size()) + " edge-ends, expected " +
                       std::to_string(want) + (v.boundary ? "" : " (ribbon ordering must be a 3-cycle)"));
    for (const auto& o : g.vertices)
      if (o.id == v.id) throw GraphError("duplicate vertex id '" + v.id + "'");
    g.vertices.push_back(v);
  }
  for (const auto& ej : j.at("edges")) {
    Edge e;
    e.id = ej.at("id").get<std::string>();
    const auto& ends = ej.at("ends");
    if (!ends.is_array() || ends.size() != 2) throw GraphError("edge '" + e.id + "' must have two ends");
    for (int k = 0; k < 2; ++k) {
      std::string h = ends[k].get<std::string>();
      auto it = hid.find(h);
      if (it == hid.end()) throw GraphError("edge '" + e.id + "': dangling edge-end '" + h + "'");
      if (g.halfedges[it->second].edge >= 0) throw GraphError("edge-end '" + h + "' used by two edges");
      g.halfedges[it->second].edge = static_cast<int>(g.edges.size());
      g.halfedges[it->second].end = k;
      e.h[k] = it->second;
    }
    for (const auto& o : g.edges)
      if (o.id == e.id) throw GraphError("duplicate edge id '" + e.id + "'");
    g.edges.push_back(e);
  }
  for (const auto& h : g.halfedges)
    if (h.edge < 0) throw GraphError("dangling edge-end '" + h.id + "'");
  if (g.edges.size() > 62) throw GraphError("at most 62 edges are supported");

  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    auto& e = g.edges[i];
    int v0 = g.halfedges[e.h[0]].vertex, v1 = g.halfedges[e.h[1]].vertex;
    bool b0 = g.vertices[v0].boundary, b1 = g.vertices[v1].boundary;
    if (b0 && b1) throw GraphError("edge '" + e.id + "' joins two boundary vertices");
    if (b0) throw GraphError("leg '" + e.id + "' must list its internal end first");
    if (b1) {
      e.kind = EdgeKind::Leg;
      g.leg_edges.push_back(static_cast<int>(i));
    } else {
      e.kind = v0 == v1 ? EdgeKind::Loop : EdgeKind::Joining;
      g.internal_edges.push_back(static_cast<int>(i));
    }
  }

  if (j.contains("marked")) {
    for (const auto& mj : j.at("marked")) {
      Marked m;
      m.vertex = g.vertex_index(mj.at("vertex").get<std::string>());
      if (!g.vertices[m.vertex].boundary) throw GraphError("marked vertex must be a boundary vertex");
      if (mj.contains("color")) {
        m.absolute = mj.at("color").get<int>();
        if (*m.absolute < 1) throw GraphError("marked color must be >= 1");
      } else {
        detail::parse_fraction(mj.at("color_fraction"), m.num, m.den);
      }
      for (const auto& o : g.marked)
        if (o.vertex == m.vertex) throw GraphError("vertex marked twice");
      g.marked.push_back(m);
    }
  }
  for (std::size_t v = 0; v < g.vertices.size(); ++v)
    if (g.vertices[v].boundary) {
      bool found = false;
      for (const auto& m : g.marked) found |= m.vertex == static_cast<int>(v);
      if (!found) throw GraphError("boundary vertex '" + g.vertices[v].id + "' has no marked color");
    }
  g.n_marked = static_cast<int>(g.leg_edges.size());

  // Internal graph: connectivity, ribbon boundary circles, genus.
  std::vector<int> internal_vertices;
  for (std::size_t v = 0; v < g.vertices.size(); ++v)
    if (!g.vertices[v].boundary) internal_vertices.push_back(static_cast<int>(v));
  if (internal_vertices.empty()) throw GraphError("graph has no internal vertex");
  auto inext = [&](int h) {
    int x = g.next(h);
    while (!g.is_internal_edge(g.halfedges[x].edge)) x = g.next(x);
    return x;
  };
  std::vector<char> seen(g.halfedges.size(), 0);
  int faces = 0;
  for (std::size_t h = 0; h < g.halfedges.size(); ++h) {
    if (seen[h] || !g.is_internal_edge(g.halfedges[h].edge)) continue;
    ++faces;
    int x = static_cast<int>(h);
    while (!seen[x]) {
      seen[x] = 1;
      x = inext(g.other(x));
    }
  }
  // a vertex whose only internal half-edge is one edge-end still contributes its circle through that end
  g.ribbon_boundaries = faces;

  int V = static_cast<int>(internal_vertices.size());
  int E = static_cast<int>(g.internal_edges.size());
  // spanning tree by BFS in edge order
  std::vector<int> parent_edge(g.vertices.size(), -2);
  std::vector<char> tree(g.edges.size(), 0);
  std::queue<int> q;
  parent_edge[internal_vertices[0]] = -1;
  q.push(internal_vertices[0]);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int e : g.internal_edges) {
      int a = g.halfedges[g.edges[e].h[0]].vertex, b = g.halfedges[g.edges[e].h[1]].vertex;
      int w = a == v ? b : (b == v ? a : -1);
      if (w < 0 || parent_edge[w] != -2) continue;
      parent_edge[w] = e;
      tree[e] = 1;
      q.push(w);
    }
  }
  for (int v : internal_vertices)
    if (parent_edge[v] == -2) throw GraphError("internal graph is disconnected");

  int chi = V - E;
  int twice_gF = 2 - chi - faces;
  if (twice_gF < 0 || twice_gF % 2 != 0) throw GraphError("ribbon structure is inconsistent");
  g.genus = twice_gF + faces - 1;
  if (E != 3 * g.genus - 3 + g.n_marked)
    throw GraphError("internal edge count " + std::to_string(E) + " does not match 3g-3+n = " +
                     std::to_string(3 * g.genus - 3 + g.n_marked));
  if (j.contains("genus") && j.at("genus").get<int>() != g.genus)
    throw GraphError("declared genus " + std::to_string(j.at("genus").get<int>()) + " differs from computed " +
                     std::to_string(g.genus));

  auto tree_path = [&](int v) {
    std::uint64_t m = 0;
    while (parent_edge[v] >= 0) {
      int e = parent_edge[v];
      m ^= std::uint64_t{1} << e;
      int a = g.halfedges[g.edges[e].h[0]].vertex, b = g.halfedges[g.edges[e].h[1]].vertex;
      v = a == v ? b : a;
    }
    return m;
  };
  for (int e : g.internal_edges) {
    if (tree[e]) continue;
    int a = g.halfedges[g.edges[e].h[0]].vertex, b = g.halfedges[g.edges[e].h[1]].vertex;
    g.basis_edges.push_back(e);
    g.basis_cycles.push_back((std::uint64_t{1} << e) ^ tree_path(a) ^ tree_path(b));
  }
  if (g.dim() != g.genus) throw GraphError("cycle space dimension differs from genus");
  g.form.assign(g.dim(), std::vector<int>(g.dim(), 0));
  for (int i = 0; i < g.dim(); ++i)
    for (int k = 0; k < g.dim(); ++k)
      g.form[i][k] = i == k ? 0 : g.intersection_mod2(g.basis_cycles[i], g.basis_cycles[k]);
  return g;
}

inline DecoratedGraph build_graph(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw GraphError(std::string("graph JSON: ") + e.what());
  }
  return build_graph(j);
}

// Twisted group algebra of H1(Gamma; Z/2).
struct AlgebraElement {
  std::map<RelH1Class, std::complex<double>> terms;

  static AlgebraElement basis(RelH1Class c, std::complex<double> v = 1.0) {
    AlgebraElement a;
    a.terms[c] = v;
    return a;
  }
};

inline AlgebraElement algebra_mul(const DecoratedGraph& g, const AlgebraElement& a, const AlgebraElement& b) {
  AlgebraElement out;
  for (const auto& [x, u] : a.terms)
    for (const auto& [y, v] : b.terms) {
      if (x.bits >> g.dim() || y.bits >> g.dim()) throw GraphError("algebra element from a different graph");
      out.terms[x + y] += static_cast<double>(g.sign(x, y)) * u * v;
    }
  return out;
}

struct Character {
  std::uint64_t q_basis = 0;  // q on basis classes

  int q(const DecoratedGraph& g, RelH1Class c) const {
    int s = popcount64(c.bits & q_basis);
    for (int i = 0; i < g.dim(); ++i)
      for (int j = i + 1; j < g.dim(); ++j)
        if ((c.bits >> i & 1u) && (c.bits >> j & 1u)) s += g.form[i][j];
    return s % 2;
  }
  int value(const DecoratedGraph& g, RelH1Class c) const { return q(g, c) ? -1 : 1; }
  std::complex<double> apply(const DecoratedGraph& g, const AlgebraElement& a) const {
    std::complex<double> s = 0.0;
    for (const auto& [c, v] : a.terms) s += static_cast<double>(value(g, c)) * v;
    return s;
  }
};

inline std::vector<Character> characters(const DecoratedGraph& g) {
  std::vector<Character> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << g.dim()); ++m) out.push_back({m});
  return out;
}

}  // namespace curveops
