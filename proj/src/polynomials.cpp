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


#include <cctype>
#include <limits>

#include <mpfr.h>

#include "maxperim/error.hpp"
#include "maxperim/pipeline.hpp"

namespace maxperim {

namespace bmp = boost::multiprecision;

namespace {

// Coefficients of t^0 .. t^48.
constexpr const char* kOctagonPerimeterCoefficients[] = {
    "8563803984117479982232573393172818348276610047246959316838387256655872",
    "-36757562971957762256433166768884793509267603912864060192884364027101184",
    "66152337375333098717233438245411622983399457619149468736826967974739968",
    "-66202009827628255733947076652696118184733299289788671027802646213820416",
    "42033580403345828191224614534012438972659544181809655477758966164881408",
    "-18953181950142721458054232615448184781228851292920395499757235462995968",
    "6790786688361483921080280822642541944806188768497117715297100944637952",
    "-2058218618695242650197271615605589498521465900890487961554567777222656",
    "519661898036620827612298078628038297122538078160606821748651700781056",
    "-105271885062338881752377059792380965744985216725352909959696593453056",
    "17022846567049524499840649827179007136206891115523021868856676188160",
    "-2300409752638978585592882084275762121478341006958876960731097464832",
    "286657343740444279969083463862811708030275860108457118864141975552",
    "-36368623222587641069111818667387388732204823767000547849301655552",
    "4710488377079952771836133728493511544552402556895090911062523904",
    "-576375293461315675942032249195563488574543633050881901599916032",
    "62479370348335228971031421065092236129622542636279079783890944",
    "-5852634224113275457409744736043691759211050964981756612050944",
    "472940328670015419031704476959013624500278043685261018136576",
    "-33204170232890601212009526399439211418502869355381160673280",
    "2043943451881331447819048584603121094991258075349364244480",
    "-111229883050697265095697776791662655429798099484617474048",
    "5384698849214794614511096063213254330174249732122083328",
    "-232798593505589953724659815997148521459619251942850560",
    "9003894302377052774819990635603424836273155562536960",
    "-311558095037500866248196651997764943419255015079936",
    "9635371582576344208603139477144787322898164482048",
    "-265914881136849371015171799699357177396926087168",
    "6537352911881897599073318260145551517258088448",
    "-142915937585753382520287017253466824236859392",
    "2773474766447168322184997293630827538677760",
    "-47694399655201711781649368889348291821568",
    "725423774155626603530948947333269684224",
    "-9738082617441544437635181820812197888",
    "115086843866723348026033261837811712",
    "-1193816644613689654665612818907136",
    "10829446302748698450583070179328",
    "-85517739615251895256392663040",
    "584574334125421235902873600",
    "-3434820210452081718329344",
    "17195167136435692371968",
    "-72517854035614629888",
    "253889810916737024",
    "-723588467449856",
    "1633674266624",
    "-2807592960",
    "3446272",
    "-2688",
    "1",
};

constexpr std::uint64_t kOctagonPerimeterDigest = 0x281a64aa5eefb7f8ull;

constexpr const char* kEquilateralCoefficients[] = {"1", "-12", "46", "-78", "57", "-18", "2"};

template <size_t N>
IntegerPolynomial load(std::string name, const char* const (&table)[N]) {
  IntegerPolynomial p;
  p.name = std::move(name);
  for (const char* c : table) p.coefficients.emplace_back(c);
  return p;
}

}  // namespace

std::uint64_t IntegerPolynomial::digest() const {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](char ch) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ull;
  };
  for (size_t i = 0; i < coefficients.size(); ++i) {
    if (i) mix(',');
    for (char ch : coefficients[i].str()) mix(ch);
  }
  return h;
}

const IntegerPolynomial& octagon_perimeter_polynomial() {
  static const IntegerPolynomial p = [] {
    IntegerPolynomial q = load("q8", kOctagonPerimeterCoefficients);
    if (q.degree() != 48 || q.digest() != kOctagonPerimeterDigest) {
      throw Error(ErrorKind::parse_error, "embedded degree-48 coefficient table is corrupt");
    }
    return q;
  }();
  return p;
}

const IntegerPolynomial& equilateral_octagon_polynomial() {
  static const IntegerPolynomial p = load("E8", kEquilateralCoefficients);
  return p;
}

const IntegerPolynomial& polynomial_by_name(std::string_view name) {
  if (name == "q8" || name == "P8") return octagon_perimeter_polynomial();
  if (name == "E8") return equilateral_octagon_polynomial();
  throw Error(ErrorKind::parse_error, "unknown polynomial '" + std::string(name) + "' (expected q8, P8 or E8)");
}

namespace {

Real to_real(const BigInt& z) {
  Real r;
  mpfr_set_z(r.backend().data(), z.backend().data(), MPFR_RNDN);
  return r;
}

}  // namespace

RootReport verify_polynomial_root(const IntegerPolynomial& poly, const Real& value, unsigned tol_bits) {
  PrecisionScope scope(precision_of(value));
  Real p = 0;
  Real dp = 0;
  for (size_t i = poly.coefficients.size(); i-- > 0;) {
    dp = dp * value + p;
    p = p * value + to_real(poly.coefficients[i]);
  }
  RootReport r;
  r.value = value;
  r.abs_value = bmp::abs(p);
  r.abs_derivative = bmp::abs(dp);
  if (r.abs_derivative != 0) {
    r.backward_error = r.abs_value / r.abs_derivative;
  } else {
    r.backward_error = r.abs_value == 0 ? Real(0) : std::numeric_limits<Real>::infinity();
  }
  r.confirmed = r.backward_error < ldexp2(32 - static_cast<long>(tol_bits));
  return r;
}

DualRootReport dual_root_check(const IntegerPolynomial& poly, const Real& value, unsigned tol_bits) {
  PrecisionScope scope(precision_of(value));
  DualRootReport d;
  d.at_value = verify_polynomial_root(poly, value, tol_bits);
  const Real sq = value * value;
  d.at_square = verify_polynomial_root(poly, sq, tol_bits);
  if (d.at_value.confirmed && d.at_square.confirmed) {
    d.annihilated_by = "both";
  } else if (d.at_value.confirmed) {
    d.annihilated_by = "value";
  } else if (d.at_square.confirmed) {
    d.annihilated_by = "square";
  } else {
    d.annihilated_by = "neither";
  }
  return d;
}

namespace {

// Coordinate c + k * u[idx] (idx < 0: constant).
struct Coord {
  double c;
  double k;
  int idx;
};
struct VarPoint {
  Coord x;
  Coord y;
};

Real eval(const Coord& a, const std::vector<Real>& u) {
  Real v = a.c;
  if (a.idx >= 0) v += a.k * u[static_cast<size_t>(a.idx)];
  return v;
}

// Solves A x = b by Gaussian elimination with partial pivoting.
std::vector<Real> dense_solve(std::vector<std::vector<Real>> a, std::vector<Real> b) {
  const size_t n = b.size();
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    for (size_t r = col + 1; r < n; ++r) {
      if (bmp::abs(a[r][col]) > bmp::abs(a[piv][col])) piv = r;
    }
    if (a[piv][col] == 0) throw Error(ErrorKind::singular_system, "singular Jacobian");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (size_t r = col + 1; r < n; ++r) {
      const Real f = a[r][col] / a[col][col];
      for (size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<Real> x(n);
  for (size_t i = n; i-- > 0;) {
    Real s = b[i];
    for (size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

}  // namespace

Real equilateral_octagon_side(unsigned precision_bits) {
  PrecisionScope scope(precision_bits);
  // Mirror-symmetric about the y axis, with the diameter v4 v8 on it:
  // v1 = (x1, 0), v2 = (1/2, y2), v3 = (x3, y3), v4 = (0, y4),
  // v5 = (-x3, y3), v8 = (0, y8); unknowns u = (x1, y2, x3, y3, y4, y8, s).
  const VarPoint v1{{0, 1, 0}, {0, 0, -1}};
  const VarPoint v2{{0.5, 0, -1}, {0, 1, 1}};
  const VarPoint v3{{0, 1, 2}, {0, 1, 3}};
  const VarPoint v4{{0, 0, -1}, {0, 1, 4}};
  const VarPoint v5{{0, -1, 2}, {0, 1, 3}};
  const VarPoint v8{{0, 0, -1}, {0, 1, 5}};
  struct Eq {
    VarPoint a;
    VarPoint b;
    bool side;  // |a - b| = s, otherwise |a - b| = 1
  };
  const std::vector<Eq> eqs = {{v1, v2, true},  {v2, v3, true},  {v3, v4, true}, {v8, v1, true},
                               {v1, v5, false}, {v4, v8, false}, {v1, v4, false}};
  std::vector<Real> u = {Real("0.37964"),  Real("0.367756"),   Real("0.322796"), Real("0.711747"),
                         Real("0.925134"), Real("-0.0748656"), Real("0.386951")};
  const Real tol = ldexp2(-static_cast<long>(scope.bits()) + 24);
  for (int it = 0; it < 100; ++it) {
    std::vector<Real> f(7);
    std::vector<std::vector<Real>> jac(7, std::vector<Real>(7, Real(0)));
    for (size_t e = 0; e < eqs.size(); ++e) {
      const Eq& q = eqs[e];
      const Real dx = eval(q.a.x, u) - eval(q.b.x, u);
      const Real dy = eval(q.a.y, u) - eval(q.b.y, u);
      f[e] = dx * dx + dy * dy - (q.side ? Real(u[6] * u[6]) : Real(1));
      auto add = [&](const Coord& c, const Real& d, int sign) {
        if (c.idx >= 0) jac[e][static_cast<size_t>(c.idx)] += 2 * sign * c.k * d;
      };
      add(q.a.x, dx, 1);
      add(q.b.x, dx, -1);
      add(q.a.y, dy, 1);
      add(q.b.y, dy, -1);
      if (q.side) jac[e][6] -= 2 * u[6];
    }
    const std::vector<Real> step = dense_solve(jac, f);
    Real norm = 0;
    for (size_t i = 0; i < 7; ++i) {
      u[i] -= step[i];
      norm = bmp::max(norm, bmp::abs(step[i]));
    }
    if (norm < tol) return u[6];
  }
  throw Error(ErrorKind::no_convergence, "equilateral octagon system did not converge");
}

ClosedForm parse_closed_form(std::string_view text) {
  ClosedForm form;
  form.text = std::string(text);
  size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto fail = [&](const std::string& why) {
    throw Error(ErrorKind::parse_error, why + " at offset " + std::to_string(pos) + " in '" + std::string(text) + "'");
  };
  auto read_int = [&]() -> long long {
    skip();
    const size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) fail("expected an integer");
    return std::stoll(std::string(text.substr(start, pos - start)));
  };
  auto accept = [&](std::string_view tok) {
    skip();
    if (text.substr(pos, tok.size()) == tok) {
      pos += tok.size();
      return true;
    }
    return false;
  };
  bool first = true;
  for (;;) {
    skip();
    if (pos >= text.size()) {
      if (first) fail("empty expression");
      break;
    }
    int sign = 1;
    if (accept("+")) {
      sign = 1;
    } else if (accept("-")) {
      sign = -1;
    } else if (!first) {
      fail("expected '+' or '-'");
    }
    first = false;
    skip();
    long long coef = 1;
    bool has_coef = false;
    if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      coef = read_int();
      has_coef = true;
    }
    accept("*");
    if (accept("sin")) {
      if (!accept("(")) fail("expected '('");
      if (!accept("π") && !accept("pi")) fail("expected pi");
      if (!accept("/")) fail("expected '/'");
      const long long den = read_int();
      if (den <= 0) fail("denominator must be positive");
      if (!accept(")")) fail("expected ')'");
      form.sine_terms.emplace_back(sign * coef, den);
    } else {
      if (!has_coef) fail("expected a number or sin(pi/k)");
      form.constant += sign * coef;
    }
  }
  return form;
}

Real evaluate_closed_form(const ClosedForm& form) {
  Real v = form.constant;
  const Real p = pi();
  for (const auto& [coef, den] : form.sine_terms) v += Real(coef) * bmp::sin(p / Real(den));
  return v;
}

ClosedFormReport closed_form_check(std::string_view expr, const Real& value, unsigned tol_bits) {
  PrecisionScope scope(precision_of(value));
  ClosedFormReport r;
  r.closed_value = evaluate_closed_form(parse_closed_form(expr));
  r.difference = bmp::abs(r.closed_value - value);
  r.match = r.difference < ldexp2(16 - static_cast<long>(tol_bits));
  return r;
}

}  // namespace maxperim
