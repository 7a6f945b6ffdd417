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


#pragma once

#include <utility>
#include <vector>

#include "maxperim/codes.hpp"
#include "maxperim/phase2.hpp"
#include "maxperim/real.hpp"

namespace maxperim {

/// Convex polygon, vertices counterclockwise starting at the origin.
struct PolygonSolution {
  int n = 0;
  Code code;  // empty for polygons not built from a code
  AngleVector angles;
  std::vector<Complex> vertices;
  Real perimeter;
  Real gap;  // upper_bound(n) - perimeter
  Real diameter;
  Real closure_defect;
  unsigned precision_bits = 0;
  unsigned tol_bits = 0;
};

/// 2n sin(pi / 2n).
Real upper_bound(int n, unsigned precision_bits);

/// Builds the inscribed-zonogon polygon: sides c_j (z_{j+1} - z_j) with
/// z_j = exp(i phi_j), sorted by argument and summed from the origin.
/// Throws degenerate-angles, not-closed, not-convex or not-small
/// (diameter above 1 + 2^(8 - tol_bits)).
PolygonSolution reconstruct(const Code& code, const AngleVector& angles, unsigned tol_bits);

/// Wraps an arbitrary convex polygon (vertices counterclockwise) without the
/// smallness requirement. Throws not-convex.
PolygonSolution polygon_from_vertices(std::vector<Complex> vertices, unsigned precision_bits, unsigned tol_bits);

/// Largest pairwise vertex distance.
Real max_distance(const std::vector<Complex>& vertices);

struct DiameterGraph {
  int vertex_count = 0;
  std::vector<std::pair<int, int>> edges;  // i < j
};

/// Default unit-distance tolerance 2^(-tol_bits / 2).
Real default_unit_tolerance(unsigned tol_bits);

/// Vertex pairs whose distance is within `tol` of 1.
DiameterGraph diameter_graph(const PolygonSolution& poly, const Real& tol);

struct DiameterStructure {
  /// Vertices left after repeatedly removing degree-1 vertices.
  std::vector<int> core;
  int pending_edges = 0;
  /// The core is one cycle (every vertex of degree 2, connected).
  bool single_cycle = false;
  bool odd_cycle = false;
};

DiameterStructure analyze_diameter_graph(const DiameterGraph& graph);

struct ZonogonReport {
  /// Vertices of P - P, centred at the origin, counterclockwise.
  std::vector<Complex> vertices;
  /// Edge labels along the boundary: +1 for sides of P, -1 for sides of -P.
  Code traversal_code;
  Real max_vertex_modulus;
  Real max_difference_modulus;  // over all v_k - v_l
  bool small = false;           // max_vertex_modulus <= 1 + tol
  bool centrally_symmetric = false;
  bool nondegenerate = false;   // 2n vertices, no parallel edges
  bool code_matches = false;    // traversal equivalent to poly.code
};

/// Builds the zonogon by merging the sides of P and -P by argument and checks
/// smallness, central symmetry and the vertex count. Throws code-mismatch if
/// the polygon carries a code and the traversal is not equivalent to it.
ZonogonReport zonogon_check(const PolygonSolution& poly);

}  // namespace maxperim
