// Copyright 2026 The curveops Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "graph.hpp"
#include "quantum.hpp"

namespace curveops {

// Colors over all edges in the graph's edge order, legs included.
using Coloring = std::vector<int>;

struct ColoringError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Edge colors at the three slots of an internal vertex.
inline void vertex_colors(const DecoratedGraph& g, int v, const Coloring& c, int out[3]) {
  for (int s = 0; s < 3; ++s) out[s] = c[g.halfedges[g.vertices[v].cyclic[s]].edge];
}

inline std::vector<int> leg_colors(const DecoratedGraph& g, int r) {
  std::vector<int> out(g.edges.size(), 0);
  for (int e : g.leg_edges) {
    const Marked* m = g.marked_on_leg(e);
    if (!m) throw ColoringError("leg '" + g.edges[e].id + "' has no marked color");
    out[e] = m->color_at(r);
  }
  return out;
}

inline bool is_admissible(const Coloring& c, const DecoratedGraph& g, int r) {
  if (c.size() != g.edges.size()) return false;
  for (int e : g.leg_edges) {
    const Marked* m = g.marked_on_leg(e);
    try {
      if (!m || c[e] != m->color_at(r)) return false;
    } catch (const GraphError&) {
      return false;
    }
  }
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    if (g.vertices[v].boundary) continue;
    int t[3];
    vertex_colors(g, static_cast<int>(v), c, t);
    if (!admissible_triple(t[0], t[1], t[2], r)) return false;
  }
  return true;
}

// Calls visit(c) for every admissible coloring in lexicographic order of the internal edges.
inline void for_each_coloring(const DecoratedGraph& g, int r, const std::function<void(const Coloring&)>& visit) {
  Coloring c = leg_colors(g, r);
  const auto& free = g.internal_edges;
  // vertices become checkable once their last internal edge (in enumeration order) is set
  std::vector<std::vector<int>> check_at(free.size());
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    if (g.vertices[v].boundary) continue;
    int last = -1;
    for (int h : g.vertices[v].cyclic) {
      int e = g.halfedges[h].edge;
      for (std::size_t i = 0; i < free.size(); ++i)
        if (free[i] == e) last = std::max(last, static_cast<int>(i));
    }
    if (last < 0) throw ColoringError("vertex without internal edge");
    check_at[last].push_back(static_cast<int>(v));
  }
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == free.size()) {
      visit(c);
      return;
    }
    for (int x = 1; x < r; ++x) {
      c[free[i]] = x;
      bool ok = true;
      for (int v : check_at[i]) {
        int t[3];
        vertex_colors(g, v, c, t);
        if (!admissible_triple(t[0], t[1], t[2], r)) {
          ok = false;
          break;
        }
      }
      if (ok) rec(i + 1);
    }
    c[free[i]] = 0;
  };
  rec(0);
}

inline std::vector<Coloring> enumerate_colorings(const DecoratedGraph& g, int r) {
  std::vector<Coloring> out;
  for_each_coloring(g, r, [&](const Coloring& c) { out.push_back(c); });
  return out;
}

// Index of colorings by their internal colors. Dense grid when small, hash map otherwise.
class ColoringIndex {
 public:
  ColoringIndex(const DecoratedGraph& g, int r, const std::vector<Coloring>& list)
      : internal_(g.internal_edges), r_(r) {
    double cells = std::pow(static_cast<double>(r), static_cast<double>(internal_.size()));
    dense_ = cells <= 6.4e7;
    if (dense_) grid_.assign(static_cast<std::size_t>(cells), -1);
    for (std::size_t i = 0; i < list.size(); ++i) {
      std::uint64_t k = key(list[i]);
      if (dense_)
        grid_[k] = static_cast<int>(i);
      else
        map_[k] = static_cast<int>(i);
    }
  }
  // -1 when c is not in the list.
  int find(const Coloring& c) const {
    for (int e : internal_)
      if (c[e] < 1 || c[e] >= r_) return -1;
    std::uint64_t k = key(c);
    if (dense_) return grid_[k];
    auto it = map_.find(k);
    return it == map_.end() ? -1 : it->second;
  }

 private:
  std::uint64_t key(const Coloring& c) const {
    std::uint64_t k = 0;
    for (int e : internal_) k = k * static_cast<std::uint64_t>(r_) + static_cast<std::uint64_t>(c[e]);
    return k;
  }
  std::vector<int> internal_;
  int r_;
  bool dense_ = true;
  std::vector<int> grid_;
  std::unordered_map<std::uint64_t, int> map_;
};

// Local squared norm: prod of vertex weights over prod <c_e> on internal edges and <c_e>^{1/2} on legs.
inline SLog log_norm_sq_local(const Coloring& c, const DecoratedGraph& g, const Level& L) {
  SLog acc{0.0, 1};
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    if (g.vertices[v].boundary) continue;
    int t[3];
    vertex_colors(g, static_cast<int>(v), c, t);
    acc = acc * log_vertex_weight(t[0], t[1], t[2], L);
  }
  for (int e : g.internal_edges) acc = acc / SLog::of(L.qsin(c[e]));
  for (int e : g.leg_edges) acc = acc / SLog::of(L.qsin(c[e])).pow_half();
  return acc;
}

inline double norm_sq_local(const Coloring& c, const DecoratedGraph& g, const Level& L) {
  if (!is_admissible(c, g, L.r())) throw ColoringError("norm_sq: inadmissible coloring");
  return log_norm_sq_local(c, g, L).value();
}

// Global squared norm (2/r)^{chi/2} prod vertex weights / prod <c_e>, chi of the internal graph.
inline double norm_sq(const Coloring& c, const DecoratedGraph& g, const Level& L) {
  if (!is_admissible(c, g, L.r())) throw ColoringError("norm_sq: inadmissible coloring");
  int V = 0;
  for (const auto& v : g.vertices) V += v.boundary ? 0 : 1;
  int chi = V - static_cast<int>(g.internal_edges.size());
  SLog acc{0.5 * chi * std::log(2.0 / L.r()), 1};
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    if (g.vertices[v].boundary) continue;
    int t[3];
    vertex_colors(g, static_cast<int>(v), c, t);
    acc = acc * log_vertex_weight(t[0], t[1], t[2], L);
  }
  for (int e : g.internal_edges) acc = acc / SLog::of(L.qsin(c[e]));
  return acc.value();
}

// Real colorings: strict limit conditions on every vertex triple, legs pinned.
inline bool in_U(const std::vector<double>& tau, const DecoratedGraph& g, double margin = 0.0) {
  for (int e : g.internal_edges)
    if (!(tau[e] > margin && tau[e] < 1.0 - margin)) return false;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    if (g.vertices[v].boundary) continue;
    double t[3];
    for (int s = 0; s < 3; ++s) t[s] = tau[g.halfedges[g.vertices[v].cyclic[s]].edge];
    if (!(t[0] + t[1] + t[2] < 2.0 - margin)) return false;
    if (!(std::fabs(t[0] - t[1]) < t[2] - margin && t[2] < t[0] + t[1] - margin)) return false;
  }
  return true;
}

inline std::vector<double> leg_taus(const DecoratedGraph& g, int r_for_absolute = 0) {
  std::vector<double> out(g.edges.size(), 0.0);
  for (int e : g.leg_edges) {
    const Marked* m = g.marked_on_leg(e);
    if (m->absolute) {
      if (r_for_absolute <= 0) throw ColoringError("absolute leg color has no limit fraction");
      out[e] = static_cast<double>(*m->absolute) / r_for_absolute;
    } else {
      out[e] = static_cast<double>(m->num) / static_cast<double>(m->den);
    }
  }
  return out;
}

}  // namespace curveops
