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

// Fixed-code perimeter maximization.
//
// For a code c the zonogon vertex angles 0 = phi_1 <= ... <= phi_{n+1} = pi
// are the unknowns. The polygon sides are c_j (z_{j+1} - z_j) with
// z_j = exp(i phi_j), so the perimeter is sum_j 2 sin((phi_{j+1} - phi_j) / 2)
// and the boundary closes iff
//
//   g1 = sum_{j=2}^n (c_{j-1} - c_j) cos(phi_j) - (c_1 + c_n) = 0,
//   g2 = sum_{j=2}^n (c_{j-1} - c_j) sin(phi_j)               = 0.
//
// With L = -perimeter / 2 + y1 g1 + y2 g2 the KKT conditions are solved by a
// Newton-type iteration on w = (phi_2..phi_n, y1, y2) from the regular 2n-gon.
// The KKT matrix is [[H, C^T], [C, 0]] with H symmetric tridiagonal.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "maxperim/codes.hpp"
#include "maxperim/real.hpp"

namespace maxperim {

/// phi_1..phi_{n+1}; phi_1 = 0 and phi_{n+1} = pi.
struct AngleVector {
  int n = 0;
  std::vector<Real> phi;
  unsigned precision_bits = 0;
};

struct KktState {
  AngleVector angles;
  Real y1;
  Real y2;
};

enum class NewtonVariant { double_factor, schur, minres, simplified_schur, simplified_double };

std::string_view to_string(NewtonVariant v);
NewtonVariant parse_variant(std::string_view text);
/// schur for n <= 16, simplified-schur above.
NewtonVariant default_variant(int n);

/// phi_j = (j - 1) pi / n, y = 0.
KktState init_regular(int n, unsigned precision_bits);

/// sum_j 2 sin((phi_{j+1} - phi_j) / 2).
Real perimeter(const AngleVector& angles);

/// (g1, g2) in the reordered form above.
std::pair<Real, Real> closure_constraints(const AngleVector& angles, const Code& code);

/// -perimeter / 2 + y1 g1 + y2 g2.
Real lagrangian(const KktState& state, const Code& code);

/// (dL/dphi_2, ..., dL/dphi_n, g1, g2). Throws dimension-mismatch.
std::vector<Real> kkt_gradient(const KktState& state, const Code& code);

struct KktMatrix {
  std::vector<Real> h_diag;  // n - 1
  std::vector<Real> h_off;   // n - 2, H_{j,j+1}
  std::vector<Real> c1;      // n - 1, dg1/dphi_j
  std::vector<Real> c2;      // n - 1, dg2/dphi_j
};

/// Throws dimension-mismatch.
KktMatrix kkt_matrix(const KktState& state, const Code& code);

/// K v for the full (n+1)x(n+1) KKT matrix.
std::vector<Real> kkt_multiply(const KktMatrix& k, const std::vector<Real>& v);

/// det(C C^T) computed directly from the Jacobian.
Real constraint_gram_determinant(const KktState& state, const Code& code);

/// 16 sum_{i<j in J} sin^2(phi_i - phi_j), J = {j : c_j != c_{j-1}}.
Real constraint_gram_closed_form(const KktState& state, const Code& code);

/// det(C C^T) after checking that the interior angles are strictly sorted in
/// (0, pi) and that the closed form agrees. Throws degenerate-angles otherwise.
Real jacobian_rank_certificate(const KktState& state, const Code& code);

struct NewtonOptions {
  unsigned precision_bits = 360;
  unsigned tol_bits = 320;
  NewtonVariant variant = NewtonVariant::schur;
  int max_iter = 64;
  /// Multiplies every nonzero matrix entry by (1 + delta * u), u uniform in
  /// [-1, 1] from a fixed seed. Zero leaves the matrix exact.
  double matrix_perturbation = 0.0;
  std::uint64_t perturbation_seed = 1;
};

struct NewtonReport {
  int iterations = 0;
  Real final_increment_norm;
  Real final_kkt_residual;
  NewtonVariant variant = NewtonVariant::schur;
  Real perimeter;
  /// Increment norm of every step.
  std::vector<Real> increments;
  /// Steps where the Schur factorization met a tiny pivot and the double
  /// factorization was used instead.
  int fallbacks = 0;
  bool monotone = true;
  unsigned precision_bits = 0;
  unsigned tol_bits = 0;
};

struct NewtonResult {
  KktState state;
  NewtonReport report;
};

/// Full-step Newton-type iteration from init_regular until the increment
/// norm drops below 2^-tol_bits. Throws invalid-code, no-convergence (max_iter
/// reached or non-finite iterate) and singular-system. Non-monotone converged
/// angles are returned with report.monotone = false.
NewtonResult newton_solve(const Code& code, const NewtonOptions& options = {});

/// 2^-bits at the working precision.
Real tolerance(unsigned bits);

/// Euclidean norm.
Real norm2(const std::vector<Real>& v);

}  // namespace maxperim
