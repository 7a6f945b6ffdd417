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


#include <doctest.h>

#include <random>

#include "maxperim/error.hpp"
#include "maxperim/phase1.hpp"
#include "maxperim/phase2.hpp"

using namespace maxperim;
namespace bmp = boost::multiprecision;

namespace {

constexpr unsigned kPrec = 360;

Real rel_err(const Real& approx, const Real& exact) {
  return bmp::abs(approx - exact) / bmp::max(Real(1), bmp::abs(exact));
}

// Strictly sorted interior angles and random multipliers.
KktState random_state(int n, std::mt19937_64& rng) {
  KktState s = init_regular(n, kPrec);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> cuts;
  for (int j = 0; j < n - 1; ++j) cuts.push_back(0.02 + 0.96 * u(rng));
  std::sort(cuts.begin(), cuts.end());
  const Real p = pi();
  for (int j = 0; j < n - 1; ++j) s.angles.phi[static_cast<size_t>(j + 1)] = p * Real(cuts[static_cast<size_t>(j)]);
  s.y1 = Real(u(rng) - 0.5);
  s.y2 = Real(u(rng) - 0.5);
  return s;
}

Code random_code(int n, std::mt19937_64& rng) {
  for (;;) {
    std::vector<Sign> h(static_cast<size_t>(n));
    for (Sign& s : h) s = (rng() & 1u) ? 1 : -1;
    Code c(h);
    if (c.admissible()) return c;
  }
}

// Number of eigenvalues of the symmetric tridiagonal (diag, off) below x.
int sturm_count(const std::vector<Real>& diag, const std::vector<Real>& off, const Real& x) {
  int count = 0;
  Real q = diag[0] - x;
  if (q < 0) ++count;
  for (size_t i = 1; i < diag.size(); ++i) {
    if (q == 0) q = ldexp2(-1000);
    q = diag[i] - x - off[i - 1] * off[i - 1] / q;
    if (q < 0) ++count;
  }
  return count;
}

// k-th smallest eigenvalue (0-based) by bisection inside [lo, hi].
Real bisect_eigenvalue(const std::vector<Real>& diag, const std::vector<Real>& off, int k, Real lo, Real hi,
                       int steps) {
  for (int i = 0; i < steps; ++i) {
    const Real mid = (lo + hi) / 2;
    if (sturm_count(diag, off, mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return (lo + hi) / 2;
}

}  // namespace

TEST_CASE("regular start") {
  PrecisionScope scope(kPrec);
  const KktState s = init_regular(4, kPrec);
  const Real p = pi();
  REQUIRE(s.angles.phi.size() == 5);
  CHECK(s.angles.phi[0] == 0);
  CHECK(s.angles.phi[1] == p / 4);
  CHECK(s.angles.phi[2] == p / 2);
  CHECK(s.angles.phi[3] == 3 * p / 4);
  CHECK(s.angles.phi[4] == p);
  CHECK(s.y1 == 0);
  CHECK(s.y2 == 0);

  const KktState s8 = init_regular(8, 256);
  PrecisionScope inner(256);
  CHECK(rel_err(perimeter(s8.angles), 16 * bmp::sin(pi() / 16)) < ldexp2(-250));
}

TEST_CASE("regular point is stationary for odd-divisor codes") {
  PrecisionScope scope(kPrec);
  for (auto [n, d] : {std::pair{6, 3}, std::pair{9, 3}, std::pair{12, 3}, std::pair{15, 5}}) {
    const Code c = odd_divisor_code(n, d);
    const std::vector<Real> g = kkt_gradient(init_regular(n, kPrec), c);
    CHECK(norm2(g) < ldexp2(-static_cast<long>(kPrec) + 8));
  }
}

TEST_CASE("closure constraints equal the unordered side sum") {
  PrecisionScope scope(kPrec);
  std::mt19937_64 rng(5);
  for (int n : {4, 8, 16}) {
    const KktState s = random_state(n, rng);
    const Code c = random_code(n, rng);
    Complex sum{Real(0), Real(0)};
    for (int j = 0; j < n; ++j) {
      const Complex side = Complex::polar(s.angles.phi[static_cast<size_t>(j + 1)]) - Complex::polar(s.angles.phi[static_cast<size_t>(j)]);
      sum = c.half()[static_cast<size_t>(j)] > 0 ? sum + side : sum - side;
    }
    const auto [g1, g2] = closure_constraints(s.angles, c);
    CHECK(bmp::abs(g1 - sum.re) < ldexp2(-340));
    CHECK(bmp::abs(g2 - sum.im) < ldexp2(-340));
  }
}

TEST_CASE("derivatives match central finite differences" * doctest::test_suite("properties")) {
  PrecisionScope scope(kPrec);
  const Real h = ldexp2(-static_cast<long>(kPrec) / 3);
  const Real bound = ldexp2(-static_cast<long>(kPrec) / 3);
  std::mt19937_64 rng(2024);
  for (int n : {4, 8, 16}) {
    for (int trial = 0; trial < 3; ++trial) {
      CAPTURE(n);
      const KktState s = random_state(n, rng);
      const Code c = random_code(n, rng);
      const std::vector<Real> grad = kkt_gradient(s, c);
      const KktMatrix k = kkt_matrix(s, c);
      for (int i = 0; i < n - 1; ++i) {
        KktState plus = s, minus = s;
        plus.angles.phi[static_cast<size_t>(i + 1)] += h;
        minus.angles.phi[static_cast<size_t>(i + 1)] -= h;
        const Real fd = (lagrangian(plus, c) - lagrangian(minus, c)) / (2 * h);
        CHECK(rel_err(fd, grad[static_cast<size_t>(i)]) < bound);

        const std::vector<Real> gp = kkt_gradient(plus, c);
        const std::vector<Real> gm = kkt_gradient(minus, c);
        for (int r = 0; r < n - 1; ++r) {
          const Real col = (gp[static_cast<size_t>(r)] - gm[static_cast<size_t>(r)]) / (2 * h);
          Real exact = 0;
          if (r == i) exact = k.h_diag[static_cast<size_t>(i)];
          if (r == i - 1) exact = k.h_off[static_cast<size_t>(r)];
          if (r == i + 1) exact = k.h_off[static_cast<size_t>(i)];
          CHECK(rel_err(col, exact) < bound);
        }
        const Real dg1 = (gp[static_cast<size_t>(n - 1)] - gm[static_cast<size_t>(n - 1)]) / (2 * h);
        const Real dg2 = (gp[static_cast<size_t>(n)] - gm[static_cast<size_t>(n)]) / (2 * h);
        CHECK(rel_err(dg1, k.c1[static_cast<size_t>(i)]) < bound);
        CHECK(rel_err(dg2, k.c2[static_cast<size_t>(i)]) < bound);
      }
      // multiplier derivatives of L are the constraints
      KktState plus = s, minus = s;
      plus.y1 += h;
      minus.y1 -= h;
      CHECK(rel_err((lagrangian(plus, c) - lagrangian(minus, c)) / (2 * h), grad[static_cast<size_t>(n - 1)]) < bound);
    }
  }
}

TEST_CASE("Hessian at the regular start is a scaled second-difference matrix") {
  PrecisionScope scope(kPrec);
  for (int n : {4, 8, 16}) {
    std::mt19937_64 rng(static_cast<unsigned>(n));
    const Code c = random_code(n, rng);
    const KktMatrix k = kkt_matrix(init_regular(n, kPrec), c);
    const Real q = bmp::sin(pi() / (2 * n)) / 4;
    for (const Real& d : k.h_diag) CHECK(bmp::abs(d - 2 * q) < ldexp2(-350));
    for (const Real& o : k.h_off) CHECK(bmp::abs(o + q) < ldexp2(-350));
  }
}

TEST_CASE("Hessian eigenvalues at the regular start" * doctest::test_suite("properties")) {
  PrecisionScope scope(kPrec);
  for (int n : {4, 8, 16}) {
    const Code c = Code::parse(std::string(static_cast<size_t>(n / 2), '+') + std::string(static_cast<size_t>(n / 2), '-'));
    const KktMatrix k = kkt_matrix(init_regular(n, kPrec), c);
    const Real s = bmp::sin(pi() / (2 * n));
    for (int l = 1; l <= n - 1; ++l) {
      const Real expected = (1 - bmp::cos(l * pi() / n)) * s / 2;
      const Real found = bisect_eigenvalue(k.h_diag, k.h_off, l - 1, Real(0), Real(1), 345);
      CHECK(bmp::abs(found - expected) < ldexp2(-300));
    }
  }
}

TEST_CASE("Gram determinant closed form" * doctest::test_suite("properties")) {
  PrecisionScope scope(kPrec);
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    const KktState s = random_state(8, rng);
    const Code c = random_code(8, rng);
    const Real direct = constraint_gram_determinant(s, c);
    CHECK(rel_err(direct, constraint_gram_closed_form(s, c)) < ldexp2(-300));
    CHECK(jacobian_rank_certificate(s, c) > 0);
  }

  // two sign changes, at j = 3 and j = 6
  const Code two = Code::parse("++---+++");
  const KktState r = init_regular(8, kPrec);
  const Real expected = 16 * bmp::pow(bmp::sin(r.angles.phi[2] - r.angles.phi[5]), 2);
  CHECK(rel_err(constraint_gram_determinant(r, two), expected) < ldexp2(-300));

  // collapsing the angles at the sign changes removes the rank
  KktState collapsed = r;
  collapsed.angles.phi[5] = collapsed.angles.phi[2];
  CHECK(bmp::abs(constraint_gram_determinant(collapsed, two)) < ldexp2(-340));
  CHECK_THROWS_AS(jacobian_rank_certificate(collapsed, two), Error);
}

TEST_CASE("Newton solve reproduces the known optima") {
  PrecisionScope scope(kPrec);
  const NewtonResult r4 = newton_solve(expand_quarter(*published_quarter_code(4)));
  CHECK(rel_err(r4.report.perimeter, 2 + 4 * bmp::sin(pi() / 12)) < Real("1e-100"));

  const NewtonResult r8 = newton_solve(expand_quarter(*published_quarter_code(8)));
  CHECK(to_decimal(r8.report.perimeter, 54) == "3.12114713405983135386465950363808653090954216646976012");
  CHECK(r8.report.monotone);
}

TEST_CASE("converged solutions satisfy the KKT conditions") {
  PrecisionScope scope(kPrec);
  for (int n : {4, 8, 16}) {
    const Code c = expand_quarter(*published_quarter_code(n));
    const NewtonResult r = newton_solve(c);
    const auto [g1, g2] = closure_constraints(r.state.angles, c);
    const Real bound = ldexp2(-320 + 8);
    CHECK(bmp::abs(g1) < bound);
    CHECK(bmp::abs(g2) < bound);
    CHECK(r.report.final_kkt_residual < bound);
    CHECK(jacobian_rank_certificate(r.state, c) > 0);
  }
}

TEST_CASE("Schur variant converges quadratically") {
  PrecisionScope scope(kPrec);
  const NewtonResult r = newton_solve(expand_quarter(*published_quarter_code(16)));
  const std::vector<Real>& e = r.report.increments;
  REQUIRE(e.size() >= 4);
  int checked = 0;
  for (size_t k = 1; k + 1 < e.size(); ++k) {
    // stop before rounding noise dominates
    if (e[k + 1] < ldexp2(-330)) break;
    CHECK(e[k + 1] <= 100 * e[k] * e[k]);
    ++checked;
  }
  CHECK(checked >= 2);
}

TEST_CASE("all variants agree") {
  PrecisionScope scope(kPrec);
  for (int n : {4, 8, 16, 32}) {
    CAPTURE(n);
    const Code c = expand_quarter(*published_quarter_code(n));
    NewtonOptions base;
    base.max_iter = 320;
    const NewtonResult ref = newton_solve(c, base);
    for (NewtonVariant v : {NewtonVariant::double_factor, NewtonVariant::minres, NewtonVariant::simplified_schur,
                            NewtonVariant::simplified_double}) {
      NewtonOptions o = base;
      o.variant = v;
      const NewtonResult r = newton_solve(c, o);
      Real diff = 0;
      for (size_t j = 0; j < ref.state.angles.phi.size(); ++j) {
        diff = bmp::max(diff, bmp::abs(r.state.angles.phi[j] - ref.state.angles.phi[j]));
      }
      CHECK(diff < ldexp2(-(320 - 16)));
    }
  }
}

TEST_CASE("an inexact KKT matrix keeps the fixed point") {
  PrecisionScope scope(kPrec);
  for (NewtonVariant v : {NewtonVariant::schur, NewtonVariant::simplified_schur}) {
    const Code c = expand_quarter(*published_quarter_code(8));
    NewtonOptions exact;
    exact.variant = v;
    exact.max_iter = 256;
    NewtonOptions noisy = exact;
    noisy.matrix_perturbation = 1e-3;
    const NewtonResult a = newton_solve(c, exact);
    const NewtonResult b = newton_solve(c, noisy);
    Real diff = 0;
    for (size_t j = 0; j < a.state.angles.phi.size(); ++j) {
      diff = bmp::max(diff, bmp::abs(a.state.angles.phi[j] - b.state.angles.phi[j]));
    }
    CHECK(diff < ldexp2(-320 + 8));
  }
}

TEST_CASE("Newton errors") {
  const Code c = expand_quarter(*published_quarter_code(8));
  NewtonOptions o;
  o.max_iter = 2;
  CHECK_THROWS_AS(newton_solve(c, o), Error);
  try {
    newton_solve(c, o);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::no_convergence);
  }
  NewtonOptions bad;
  bad.precision_bits = 300;
  CHECK_THROWS_AS(newton_solve(c, bad), Error);
  CHECK_THROWS_AS(kkt_gradient(init_regular(6, kPrec), c), Error);
  CHECK(parse_variant("simplified-double") == NewtonVariant::simplified_double);
  CHECK_THROWS_AS(parse_variant("lu"), Error);
  CHECK(default_variant(16) == NewtonVariant::schur);
  CHECK(default_variant(32) == NewtonVariant::simplified_schur);
}
