// Copyright 2026 the maxperim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "maxperim/geometry.hpp"

#include <algorithm>
#include <numeric>

#include "maxperim/error.hpp"

namespace maxperim {

namespace bmp = boost::multiprecision;

namespace {

Real cross(const Complex& a, const Complex& b) { return a.re * b.im - a.im * b.re; }

Real closure_tolerance(unsigned tol_bits) { return ldexp2(8 - static_cast<long>(tol_bits)); }

// Sorts edge vectors by argument in (-pi, pi].
std::vector<size_t> order_by_argument(const std::vector<Complex>& edges) {
  std::vector<Real> args;
  args.reserve(edges.size());
  for (const Complex& e : edges) args.push_back(e.arg());
  std::vector<size_t> idx(edges.size());
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return args[a] < args[b]; });
  return idx;
}

void check_convex(const std::vector<Complex>& edges) {
  const size_t m = edges.size();
  for (size_t i = 0; i < m; ++i) {
    if (!(cross(edges[i], edges[(i + 1) % m]) > 0)) {
      throw Error(ErrorKind::not_convex, "consecutive sides " + std::to_string(i + 1) + " and " +
                                             std::to_string((i + 1) % m + 1) + " do not turn left");
    }
  }
}

}  // namespace

Real upper_bound(int n, unsigned precision_bits) {
  if (n < 3) throw Error(ErrorKind::invalid_n, "n must be at least 3");
  PrecisionScope scope(precision_bits);
  return 2 * n * bmp::sin(pi() / (2 * n));
}

Real max_distance(const std::vector<Complex>& v) {
  Real best = 0;
  for (size_t i = 0; i < v.size(); ++i) {
    for (size_t j = i + 1; j < v.size(); ++j) best = bmp::max(best, (v[i] - v[j]).abs());
  }
  return best;
}

Real default_unit_tolerance(unsigned tol_bits) { return ldexp2(-static_cast<long>(tol_bits / 2)); }

PolygonSolution reconstruct(const Code& code, const AngleVector& angles, unsigned tol_bits) {
  const int n = code.n();
  if (angles.n != n || static_cast<int>(angles.phi.size()) != n + 1) {
    throw Error(ErrorKind::dimension_mismatch, "angles do not match the code");
  }
  PrecisionScope scope(angles.precision_bits);
  const Real p = pi();
  if (angles.phi.front() != 0 || bmp::abs(angles.phi.back() - p) > ldexp2(-static_cast<long>(scope.bits()) + 4)) {
    throw Error(ErrorKind::degenerate_angles, "angles must run from 0 to pi");
  }
  for (int j = 0; j < n; ++j) {
    if (!(angles.phi[static_cast<size_t>(j)] < angles.phi[static_cast<size_t>(j + 1)])) {
      throw Error(ErrorKind::degenerate_angles, "angles are not strictly increasing");
    }
  }

  std::vector<Complex> sides;
  Complex sum{Real(0), Real(0)};
  Real per = 0;
  for (int j = 0; j < n; ++j) {
    Complex d = Complex::polar(angles.phi[static_cast<size_t>(j + 1)]) - Complex::polar(angles.phi[static_cast<size_t>(j)]);
    if (code.half()[static_cast<size_t>(j)] < 0) d = d * Real(-1);
    sides.push_back(d);
    sum = sum + d;
    per += 2 * bmp::sin((angles.phi[static_cast<size_t>(j + 1)] - angles.phi[static_cast<size_t>(j)]) / 2);
  }
  PolygonSolution poly;
  poly.n = n;
  poly.code = code;
  poly.angles = angles;
  poly.precision_bits = scope.bits();
  poly.tol_bits = tol_bits;
  poly.closure_defect = sum.abs();
  if (poly.closure_defect >= closure_tolerance(tol_bits)) {
    throw Error(ErrorKind::not_closed, "closure defect " + to_decimal(poly.closure_defect, 6));
  }
  const std::vector<size_t> order = order_by_argument(sides);
  std::vector<Complex> edges;
  for (size_t i : order) edges.push_back(sides[i]);
  check_convex(edges);
  Complex v{Real(0), Real(0)};
  for (int j = 0; j < n; ++j) {
    poly.vertices.push_back(v);
    v = v + edges[static_cast<size_t>(j)];
  }
  poly.perimeter = per;
  poly.gap = upper_bound(n, poly.precision_bits) - per;
  poly.diameter = max_distance(poly.vertices);
  if (poly.diameter > 1 + closure_tolerance(tol_bits)) {
    throw Error(ErrorKind::not_small, "diameter " + to_decimal(poly.diameter, 20));
  }
  return poly;
}

PolygonSolution polygon_from_vertices(std::vector<Complex> vertices, unsigned precision_bits, unsigned tol_bits) {
  PrecisionScope scope(precision_bits);
  const size_t n = vertices.size();
  if (n < 3) throw Error(ErrorKind::invalid_n, "a polygon needs at least 3 vertices");
  std::vector<Complex> edges;
  for (size_t i = 0; i < n; ++i) edges.push_back(vertices[(i + 1) % n] - vertices[i]);
  check_convex(edges);
  // convex with all left turns; the total turning must be one full circle
  Real turning = 0;
  for (size_t i = 0; i < n; ++i) {
    const Complex& a = edges[i];
    const Complex& b = edges[(i + 1) % n];
    turning += bmp::atan2(cross(a, b), a.re * b.re + a.im * b.im);
  }
  if (bmp::abs(turning - 2 * pi()) > Real("1e-20")) throw Error(ErrorKind::not_convex, "polygon winds more than once");
  PolygonSolution poly;
  poly.n = static_cast<int>(n);
  poly.precision_bits = scope.bits();
  poly.tol_bits = tol_bits;
  poly.perimeter = 0;
  for (const Complex& e : edges) poly.perimeter += e.abs();
  poly.gap = upper_bound(poly.n, precision_bits) - poly.perimeter;
  poly.closure_defect = 0;
  poly.vertices = std::move(vertices);
  poly.diameter = max_distance(poly.vertices);
  return poly;
}

DiameterGraph diameter_graph(const PolygonSolution& poly, const Real& tol) {
  PrecisionScope scope(poly.precision_bits);
  DiameterGraph g;
  g.vertex_count = static_cast<int>(poly.vertices.size());
  for (int i = 0; i < g.vertex_count; ++i) {
    for (int j = i + 1; j < g.vertex_count; ++j) {
      const Real d = (poly.vertices[static_cast<size_t>(i)] - poly.vertices[static_cast<size_t>(j)]).abs();
      if (bmp::abs(d - 1) <= tol) g.edges.emplace_back(i, j);
    }
  }
  return g;
}

DiameterStructure analyze_diameter_graph(const DiameterGraph& graph) {
  const int n = graph.vertex_count;
  std::vector<std::vector<int>> adj(static_cast<size_t>(n));
  for (const auto& [a, b] : graph.edges) {
    adj[static_cast<size_t>(a)].push_back(b);
    adj[static_cast<size_t>(b)].push_back(a);
  }
  std::vector<int> degree(static_cast<size_t>(n));
  std::vector<bool> alive(static_cast<size_t>(n), true);
  for (int v = 0; v < n; ++v) degree[static_cast<size_t>(v)] = static_cast<int>(adj[static_cast<size_t>(v)].size());
  DiameterStructure out;
  std::vector<int> stack;
  for (int v = 0; v < n; ++v) {
    if (degree[static_cast<size_t>(v)] <= 1) stack.push_back(v);
  }
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    if (!alive[static_cast<size_t>(v)]) continue;
    alive[static_cast<size_t>(v)] = false;
    for (int u : adj[static_cast<size_t>(v)]) {
      if (!alive[static_cast<size_t>(u)]) continue;
      ++out.pending_edges;
      if (--degree[static_cast<size_t>(u)] == 1) stack.push_back(u);
    }
  }
  for (int v = 0; v < n; ++v) {
    if (alive[static_cast<size_t>(v)]) out.core.push_back(v);
  }
  if (out.core.empty()) return out;
  bool all_two = true;
  for (int v : out.core) all_two = all_two && degree[static_cast<size_t>(v)] == 2;
  // connectivity of the core
  std::vector<bool> seen(static_cast<size_t>(n), false);
  std::vector<int> todo{out.core.front()};
  seen[static_cast<size_t>(out.core.front())] = true;
  size_t reached = 0;
  while (!todo.empty()) {
    const int v = todo.back();
    todo.pop_back();
    ++reached;
    for (int u : adj[static_cast<size_t>(v)]) {
      if (alive[static_cast<size_t>(u)] && !seen[static_cast<size_t>(u)]) {
        seen[static_cast<size_t>(u)] = true;
        todo.push_back(u);
      }
    }
  }
  out.single_cycle = all_two && reached == out.core.size();
  out.odd_cycle = out.single_cycle && out.core.size() % 2 == 1;
  return out;
}

ZonogonReport zonogon_check(const PolygonSolution& poly) {
  PrecisionScope scope(poly.precision_bits);
  const size_t n = poly.vertices.size();
  std::vector<Complex> edges;
  std::vector<Sign> labels;
  for (size_t i = 0; i < n; ++i) {
    const Complex side = poly.vertices[(i + 1) % n] - poly.vertices[i];
    edges.push_back(side);
    labels.push_back(1);
    edges.push_back(side * Real(-1));
    labels.push_back(-1);
  }
  const std::vector<size_t> order = order_by_argument(edges);
  ZonogonReport rep;
  const Real tol = closure_tolerance(poly.tol_bits);

  // walk the merged edges; the first vertex is fixed after centring
  std::vector<Complex> walk;
  std::vector<Sign> traversal;
  Complex v{Real(0), Real(0)};
  Complex centre{Real(0), Real(0)};
  for (size_t i : order) {
    walk.push_back(v);
    centre = centre + v;
    v = v + edges[i];
    traversal.push_back(labels[i]);
  }
  centre = centre * (Real(1) / Real(static_cast<unsigned long>(walk.size())));
  rep.max_vertex_modulus = 0;
  for (Complex& w : walk) {
    w = w - centre;
    rep.max_vertex_modulus = bmp::max(rep.max_vertex_modulus, w.abs());
  }
  rep.vertices = walk;
  rep.small = rep.max_vertex_modulus <= 1 + tol;

  rep.max_difference_modulus = 0;
  for (size_t k = 0; k < n; ++k) {
    for (size_t l = 0; l < n; ++l) {
      rep.max_difference_modulus = bmp::max(rep.max_difference_modulus, (poly.vertices[k] - poly.vertices[l]).abs());
    }
  }

  rep.nondegenerate = true;
  const size_t m = order.size();
  for (size_t i = 0; i < m; ++i) {
    if (!(cross(edges[order[i]], edges[order[(i + 1) % m]]) > 0)) rep.nondegenerate = false;
  }

  rep.centrally_symmetric = true;
  const Real sym_tol = bmp::max(tol, ldexp2(-static_cast<long>(scope.bits()) / 2));
  for (const Complex& a : walk) {
    bool found = false;
    for (const Complex& b : walk) {
      if ((a + b).abs() <= sym_tol) {
        found = true;
        break;
      }
    }
    rep.centrally_symmetric = rep.centrally_symmetric && found;
  }

  // the first n labels determine the antisymmetric traversal code
  std::vector<Sign> half(traversal.begin(), traversal.begin() + static_cast<std::ptrdiff_t>(n));
  rep.traversal_code = Code(std::move(half));
  bool antisymmetric = true;
  for (size_t j = 0; j < n; ++j) antisymmetric = antisymmetric && traversal[j + n] == -traversal[j];
  if (poly.code.n() > 0) {
    rep.code_matches = antisymmetric && equivalent(rep.traversal_code, poly.code);
    if (!rep.code_matches) {
      throw Error(ErrorKind::code_mismatch, "zonogon traversal " + rep.traversal_code.full_string() +
                                                " is not equivalent to " + poly.code.full_string());
    }
  }
  return rep;
}

}  // namespace maxperim
