// Copyright 2026 The curveops Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

#include "graph.hpp"

namespace curveops {

// Built-in test surfaces.
//   torus:  one vertex with a loop e and a leg f to the puncture p
//   sphere: joining edge e, legs a, d at v1 and c, b at v2
//   genus2: theta graph e1, e2, e3 with the same cyclic order at both vertices
inline const char* surface_json(const std::string& name) {
  if (name == "torus")
    return R"({"vertices":[
      {"id":"v","kind":"internal","cyclic":["e0","e1","f0"]},
      {"id":"p","kind":"boundary","cyclic":["f1"]}],
     "edges":[{"id":"e","ends":["e0","e1"]},{"id":"f","ends":["f0","f1"]}],
     "marked":[{"vertex":"p","color_fraction":"1/5"}]})";
  if (name == "sphere")
    return R"({"vertices":[
      {"id":"v1","kind":"internal","cyclic":["e0","a0","d0"]},
      {"id":"v2","kind":"internal","cyclic":["e1","c0","b0"]},
      {"id":"pa","kind":"boundary","cyclic":["a1"]},
      {"id":"pb","kind":"boundary","cyclic":["b1"]},
      {"id":"pc","kind":"boundary","cyclic":["c1"]},
      {"id":"pd","kind":"boundary","cyclic":["d1"]}],
     "edges":[{"id":"e","ends":["e0","e1"]},{"id":"a","ends":["a0","a1"]},{"id":"b","ends":["b0","b1"]},
              {"id":"c","ends":["c0","c1"]},{"id":"d","ends":["d0","d1"]}],
     "marked":[{"vertex":"pa","color_fraction":"2/5"},{"vertex":"pb","color_fraction":"2/5"},
               {"vertex":"pc","color_fraction":"2/5"},{"vertex":"pd","color_fraction":"2/5"}]})";
  if (name == "genus2")
    return R"({"vertices":[
      {"id":"v1","kind":"internal","cyclic":["e1a","e2a","e3a"]},
      {"id":"v2","kind":"internal","cyclic":["e1b","e2b","e3b"]}],
     "edges":[{"id":"e1","ends":["e1a","e1b"]},{"id":"e2","ends":["e2a","e2b"]},{"id":"e3","ends":["e3a","e3b"]}],
     "marked":[]})";
  throw GraphError("unknown surface '" + name + "' (expected torus, sphere or genus2)");
}

inline DecoratedGraph builtin_surface(const std::string& name) { return build_graph(std::string(surface_json(name))); }

}  // namespace curveops
