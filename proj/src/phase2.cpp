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


#include "maxperim/phase2.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include <Eigen/Dense>

#include "maxperim/error.hpp"

namespace maxperim {

namespace bmp = boost::multiprecision;

std::string_view to_string(NewtonVariant v) {
  switch (v) {
    case NewtonVariant::double_factor: return "double-factor";
    case NewtonVariant::schur: return "schur";
    case NewtonVariant::minres: return "minres";
    case NewtonVariant::simplified_schur: return "simplified-schur";
    case NewtonVariant::simplified_double: return "simplified-double";
  }
  return "unknown";
}

NewtonVariant parse_variant(std::string_view text) {
  for (NewtonVariant v : {NewtonVariant::double_factor, NewtonVariant::schur, NewtonVariant::minres,
                          NewtonVariant::simplified_schur, NewtonVariant::simplified_double}) {
    if (text == to_string(v)) return v;
  }
  throw Error(ErrorKind::parse_error, "unknown Newton variant '" + std::string(text) + "'");
}

NewtonVariant default_variant(int n) {
  return n <= 16 ? NewtonVariant::schur : NewtonVariant::simplified_schur;
}

Real tolerance(unsigned bits) { return ldexp2(-static_cast<long>(bits)); }

Real norm2(const std::vector<Real>& v) {
  Real s = 0;
  for (const Real& x : v) s += x * x;
  return bmp::sqrt(s);
}

namespace {

void check_dims(const KktState& state, const Code& code) {
  const AngleVector& a = state.angles;
  if (a.n != code.n() || static_cast<int>(a.phi.size()) != a.n + 1) {
    throw Error(ErrorKind::dimension_mismatch,
                "angle vector of n=" + std::to_string(a.n) + " does not fit code of n=" + std::to_string(code.n()));
  }
}

int c_at(const Code& code, int j) { return code.half()[static_cast<size_t>(j - 1)]; }  // c_j, 1-based

}  // namespace

KktState init_regular(int n, unsigned precision_bits) {
  if (n < 3) throw Error(ErrorKind::invalid_n, "n must be at least 3");
  PrecisionScope scope(precision_bits);
  KktState s;
  s.angles.n = n;
  s.angles.precision_bits = scope.bits();
  const Real p = pi();
  for (int j = 1; j <= n + 1; ++j) s.angles.phi.push_back(p * (j - 1) / n);
  s.angles.phi.front() = 0;
  s.angles.phi.back() = p;
  s.y1 = 0;
  s.y2 = 0;
  return s;
}

Real perimeter(const AngleVector& a) {
  PrecisionScope scope(a.precision_bits);
  Real s = 0;
  for (int j = 0; j < a.n; ++j) s += 2 * bmp::sin((a.phi[static_cast<size_t>(j + 1)] - a.phi[static_cast<size_t>(j)]) / 2);
  return s;
}

std::pair<Real, Real> closure_constraints(const AngleVector& a, const Code& code) {
  PrecisionScope scope(a.precision_bits);
  Real g1 = -(c_at(code, 1) + c_at(code, a.n));
  Real g2 = 0;
  for (int j = 2; j <= a.n; ++j) {
    const int d = c_at(code, j - 1) - c_at(code, j);
    if (d == 0) continue;
    const Real& phi = a.phi[static_cast<size_t>(j - 1)];
    g1 += d * bmp::cos(phi);
    g2 += d * bmp::sin(phi);
  }
  return {g1, g2};
}

Real lagrangian(const KktState& state, const Code& code) {
  check_dims(state, code);
  PrecisionScope scope(state.angles.precision_bits);
  const auto [g1, g2] = closure_constraints(state.angles, code);
  return -perimeter(state.angles) / 2 + state.y1 * g1 + state.y2 * g2;
}

std::vector<Real> kkt_gradient(const KktState& state, const Code& code) {
  check_dims(state, code);
  const AngleVector& a = state.angles;
  PrecisionScope scope(a.precision_bits);
  const int n = a.n;
  std::vector<Real> half_cos(static_cast<size_t>(n));  // cos((phi_{j+1} - phi_j) / 2)
  for (int j = 0; j < n; ++j) half_cos[static_cast<size_t>(j)] = bmp::cos((a.phi[static_cast<size_t>(j + 1)] - a.phi[static_cast<size_t>(j)]) / 2);
  std::vector<Real> out;
  out.reserve(static_cast<size_t>(n + 1));
  for (int j = 2; j <= n; ++j) {
    Real g = (half_cos[static_cast<size_t>(j - 1)] - half_cos[static_cast<size_t>(j - 2)]) / 2;
    const int d = c_at(code, j - 1) - c_at(code, j);
    if (d != 0) {
      const Real& phi = a.phi[static_cast<size_t>(j - 1)];
      g += d * (state.y2 * bmp::cos(phi) - state.y1 * bmp::sin(phi));
    }
    out.push_back(g);
  }
  auto [g1, g2] = closure_constraints(a, code);
  out.push_back(g1);
  out.push_back(g2);
  return out;
}

KktMatrix kkt_matrix(const KktState& state, const Code& code) {
  check_dims(state, code);
  const AngleVector& a = state.angles;
  PrecisionScope scope(a.precision_bits);
  const int n = a.n;
  std::vector<Real> half_sin(static_cast<size_t>(n));  // sin((phi_{j+1} - phi_j) / 2)
  for (int j = 0; j < n; ++j) half_sin[static_cast<size_t>(j)] = bmp::sin((a.phi[static_cast<size_t>(j + 1)] - a.phi[static_cast<size_t>(j)]) / 2);
  KktMatrix k;
  for (int j = 2; j <= n; ++j) {
    const Real& phi = a.phi[static_cast<size_t>(j - 1)];
    const int d = c_at(code, j) - c_at(code, j - 1);
    Real h = (half_sin[static_cast<size_t>(j - 1)] + half_sin[static_cast<size_t>(j - 2)]) / 4;
    if (d != 0) {
      const Real cs = bmp::cos(phi);
      const Real sn = bmp::sin(phi);
      h += d * (state.y1 * cs + state.y2 * sn);
      k.c1.push_back(d * sn);
      k.c2.push_back(-d * cs);
    } else {
      k.c1.push_back(Real(0));
      k.c2.push_back(Real(0));
    }
    k.h_diag.push_back(h);
    if (j < n) k.h_off.push_back(-half_sin[static_cast<size_t>(j - 1)] / 4);
  }
  return k;
}

std::vector<Real> kkt_multiply(const KktMatrix& k, const std::vector<Real>& v) {
  const size_t m = k.h_diag.size();
  if (v.size() != m + 2) throw Error(ErrorKind::dimension_mismatch, "KKT vector length");
  std::vector<Real> out(m + 2);
  Real s1 = 0;
  Real s2 = 0;
  for (size_t i = 0; i < m; ++i) {
    Real t = k.h_diag[i] * v[i] + k.c1[i] * v[m] + k.c2[i] * v[m + 1];
    if (i > 0) t += k.h_off[i - 1] * v[i - 1];
    if (i + 1 < m) t += k.h_off[i] * v[i + 1];
    out[i] = t;
    s1 += k.c1[i] * v[i];
    s2 += k.c2[i] * v[i];
  }
  out[m] = s1;
  out[m + 1] = s2;
  return out;
}

Real constraint_gram_determinant(const KktState& state, const Code& code) {
  check_dims(state, code);
  PrecisionScope scope(state.angles.precision_bits);
  const KktMatrix k = kkt_matrix(state, code);
  Real a = 0, b = 0, d = 0;
  for (size_t i = 0; i < k.c1.size(); ++i) {
    a += k.c1[i] * k.c1[i];
    b += k.c1[i] * k.c2[i];
    d += k.c2[i] * k.c2[i];
  }
  return a * d - b * b;
}

Real constraint_gram_closed_form(const KktState& state, const Code& code) {
  check_dims(state, code);
  const AngleVector& a = state.angles;
  PrecisionScope scope(a.precision_bits);
  std::vector<int> jumps;
  for (int j = 2; j <= a.n; ++j) {
    if (c_at(code, j) != c_at(code, j - 1)) jumps.push_back(j);
  }
  Real s = 0;
  for (size_t p = 0; p < jumps.size(); ++p) {
    for (size_t q = p + 1; q < jumps.size(); ++q) {
      const Real t = bmp::sin(a.phi[static_cast<size_t>(jumps[p] - 1)] - a.phi[static_cast<size_t>(jumps[q] - 1)]);
      s += t * t;
    }
  }
  return 16 * s;
}

Real jacobian_rank_certificate(const KktState& state, const Code& code) {
  check_dims(state, code);
  const AngleVector& a = state.angles;
  PrecisionScope scope(a.precision_bits);
  for (int j = 0; j < a.n; ++j) {
    if (!(a.phi[static_cast<size_t>(j)] < a.phi[static_cast<size_t>(j + 1)])) {
      throw Error(ErrorKind::degenerate_angles, "angles are not strictly increasing at index " + std::to_string(j + 1));
    }
  }
  const Real direct = constraint_gram_determinant(state, code);
  const Real closed = constraint_gram_closed_form(state, code);
  const Real scale = bmp::max(Real(1), bmp::abs(closed));
  if (bmp::abs(direct - closed) > scale * ldexp2(-static_cast<long>(a.precision_bits) + 16)) {
    throw Error(ErrorKind::degenerate_angles, "Gram determinant disagrees with its closed form");
  }
  return direct;
}

namespace {

void perturb(KktMatrix& k, double delta, std::uint64_t seed) {
  if (delta == 0.0) return;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto apply = [&](std::vector<Real>& v) {
    for (Real& x : v) {
      if (x != 0) x *= Real(1 + delta * u(rng));
    }
  };
  apply(k.h_diag);
  apply(k.h_off);
  apply(k.c1);
  apply(k.c2);
}

// Dense double LU of the whole KKT matrix.
class DoubleFactor {
 public:
  explicit DoubleFactor(const KktMatrix& k) {
    const Eigen::Index m = static_cast<Eigen::Index>(k.h_diag.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m + 2, m + 2);
    for (Eigen::Index i = 0; i < m; ++i) {
      a(i, i) = to_double(k.h_diag[static_cast<size_t>(i)]);
      if (i + 1 < m) {
        a(i, i + 1) = a(i + 1, i) = to_double(k.h_off[static_cast<size_t>(i)]);
      }
      a(i, m) = a(m, i) = to_double(k.c1[static_cast<size_t>(i)]);
      a(i, m + 1) = a(m + 1, i) = to_double(k.c2[static_cast<size_t>(i)]);
    }
    lu_.compute(a);
    const Eigen::VectorXd diag = lu_.matrixLU().diagonal();
    const double scale = a.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
      if (!(std::abs(diag(i)) > scale * 1e-14)) throw Error(ErrorKind::singular_system, "KKT matrix is singular in double precision");
    }
  }

  std::vector<Real> solve(const std::vector<Real>& rhs) const {
    Eigen::VectorXd b(static_cast<Eigen::Index>(rhs.size()));
    for (size_t i = 0; i < rhs.size(); ++i) b(static_cast<Eigen::Index>(i)) = to_double(rhs[i]);
    const Eigen::VectorXd x = lu_.solve(b);
    std::vector<Real> out(rhs.size());
    for (size_t i = 0; i < rhs.size(); ++i) {
      const double v = x(static_cast<Eigen::Index>(i));
      if (!std::isfinite(v)) throw Error(ErrorKind::singular_system, "non-finite solution");
      out[i] = v;
    }
    return out;
  }

 private:
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

// LDL^T of the tridiagonal block without pivoting plus the 2x2 Schur
// complement C H^{-1} C^T, all at working precision.
class SchurFactor {
 public:
  // Returns nullopt when a pivot is tiny relative to the diagonal.
  static std::optional<SchurFactor> build(const KktMatrix& k, unsigned bits) {
    SchurFactor f;
    const size_t m = k.h_diag.size();
    f.d_.resize(m);
    f.l_.resize(m > 0 ? m - 1 : 0);
    Real hmax = 0;
    for (const Real& x : k.h_diag) hmax = bmp::max(hmax, bmp::abs(x));
    const Real floor = hmax * ldexp2(-static_cast<long>(bits) / 2);
    f.d_[0] = k.h_diag[0];
    for (size_t i = 1; i < m; ++i) {
      if (!(bmp::abs(f.d_[i - 1]) > floor)) return std::nullopt;
      f.l_[i - 1] = k.h_off[i - 1] / f.d_[i - 1];
      f.d_[i] = k.h_diag[i] - f.l_[i - 1] * k.h_off[i - 1];
    }
    if (!(bmp::abs(f.d_[m - 1]) > floor)) return std::nullopt;
    f.c1_ = k.c1;
    f.c2_ = k.c2;
    f.a1_ = f.solve_h(k.c1);
    f.a2_ = f.solve_h(k.c2);
    f.s11_ = dot(k.c1, f.a1_);
    f.s12_ = dot(k.c1, f.a2_);
    f.s22_ = dot(k.c2, f.a2_);
    f.det_ = f.s11_ * f.s22_ - f.s12_ * f.s12_;
    const Real smax = bmp::max(bmp::abs(f.s11_), bmp::abs(f.s22_));
    if (!(bmp::abs(f.det_) > smax * smax * ldexp2(-static_cast<long>(bits) / 2))) {
      throw Error(ErrorKind::singular_system, "Schur complement is singular");
    }
    return f;
  }

  std::vector<Real> solve(const std::vector<Real>& rhs) const {
    const size_t m = d_.size();
    std::vector<Real> r1(rhs.begin(), rhs.begin() + static_cast<std::ptrdiff_t>(m));
    const std::vector<Real> z = solve_h(r1);
    const Real t1 = dot(c1_, z) - rhs[m];
    const Real t2 = dot(c2_, z) - rhs[m + 1];
    const Real dy1 = (s22_ * t1 - s12_ * t2) / det_;
    const Real dy2 = (s11_ * t2 - s12_ * t1) / det_;
    std::vector<Real> out(m + 2);
    for (size_t i = 0; i < m; ++i) out[i] = z[i] - a1_[i] * dy1 - a2_[i] * dy2;
    out[m] = dy1;
    out[m + 1] = dy2;
    return out;
  }

 private:
  static Real dot(const std::vector<Real>& a, const std::vector<Real>& b) {
    Real s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  }

  std::vector<Real> solve_h(const std::vector<Real>& r) const {
    const size_t m = d_.size();
    std::vector<Real> u(r);
    for (size_t i = 1; i < m; ++i) u[i] -= l_[i - 1] * u[i - 1];
    for (size_t i = 0; i < m; ++i) u[i] /= d_[i];
    for (size_t i = m - 1; i-- > 0;) u[i] -= l_[i] * u[i + 1];
    return u;
  }

  std::vector<Real> d_, l_, c1_, c2_, a1_, a2_;
  Real s11_, s12_, s22_, det_;
};

// Unpreconditioned MINRES for the symmetric indefinite KKT system, run for a
// fixed number of iterations.
std::vector<Real> minres(const KktMatrix& k, const std::vector<Real>& b, int iterations, unsigned bits) {
  const size_t len = b.size();
  std::vector<Real> x(len, Real(0)), w(len, Real(0)), w1(len), w2(len, Real(0));
  std::vector<Real> r1 = b, r2 = b, y = b, v(len);
  const Real beta1 = norm2(b);
  if (beta1 == 0) return x;
  const Real stop = beta1 * ldexp2(-static_cast<long>(bits));
  Real beta = beta1, oldb = 0, dbar = 0, epsln = 0, phibar = beta1, cs = -1, sn = 0;
  for (int itn = 1; itn <= iterations; ++itn) {
    const Real s = 1 / beta;
    for (size_t i = 0; i < len; ++i) v[i] = s * y[i];
    y = kkt_multiply(k, v);
    if (itn >= 2) {
      const Real f = beta / oldb;
      for (size_t i = 0; i < len; ++i) y[i] -= f * r1[i];
    }
    Real alfa = 0;
    for (size_t i = 0; i < len; ++i) alfa += v[i] * y[i];
    const Real f = alfa / beta;
    for (size_t i = 0; i < len; ++i) y[i] -= f * r2[i];
    r1.swap(r2);
    r2 = y;
    oldb = beta;
    beta = norm2(y);
    const Real oldeps = epsln;
    const Real delta = cs * dbar + sn * alfa;
    const Real gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const Real gamma = bmp::hypot(gbar, beta);
    if (gamma == 0) throw Error(ErrorKind::singular_system, "MINRES breakdown");
    cs = gbar / gamma;
    sn = beta / gamma;
    const Real phi = cs * phibar;
    phibar = sn * phibar;
    w1.swap(w2);
    w2.swap(w);
    for (size_t i = 0; i < len; ++i) {
      w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) / gamma;
      x[i] += phi * w[i];
    }
    // Krylov space exhausted
    if (beta <= stop) break;
  }
  return x;
}

bool finite(const Real& x) { return bmp::isfinite(x); }

}  // namespace

NewtonResult newton_solve(const Code& code, const NewtonOptions& options) {
  if (options.precision_bits <= options.tol_bits + 32) {
    throw Error(ErrorKind::invalid_n, "precision_bits must exceed tol_bits + 32");
  }
  const int n = code.n();
  if (n < 3) throw Error(ErrorKind::invalid_code, "code too short");
  if (!code.admissible()) throw Error(ErrorKind::invalid_code, "run longer than n - 2 in " + code.to_string());
  PrecisionScope scope(options.precision_bits);
  const unsigned bits = scope.bits();

  NewtonResult res;
  res.state = init_regular(n, options.precision_bits);
  NewtonReport& rep = res.report;
  rep.variant = options.variant;
  rep.precision_bits = bits;
  rep.tol_bits = options.tol_bits;
  const Real tol = tolerance(options.tol_bits);

  const bool simplified = options.variant == NewtonVariant::simplified_schur ||
                          options.variant == NewtonVariant::simplified_double;
  std::optional<SchurFactor> frozen_schur;
  std::optional<DoubleFactor> frozen_double;
  if (simplified) {
    KktMatrix k0 = kkt_matrix(res.state, code);
    perturb(k0, options.matrix_perturbation, options.perturbation_seed);
    if (options.variant == NewtonVariant::simplified_schur) frozen_schur = SchurFactor::build(k0, bits);
    if (!frozen_schur) frozen_double.emplace(k0);
  }

  std::uint64_t seed = options.perturbation_seed;
  bool converged = false;
  for (int it = 0; it < options.max_iter; ++it) {
    const std::vector<Real> grad = kkt_gradient(res.state, code);
    std::vector<Real> step;
    if (simplified) {
      step = frozen_schur ? frozen_schur->solve(grad) : frozen_double->solve(grad);
    } else {
      KktMatrix k = kkt_matrix(res.state, code);
      perturb(k, options.matrix_perturbation, seed++);
      switch (options.variant) {
        case NewtonVariant::double_factor:
          step = DoubleFactor(k).solve(grad);
          break;
        case NewtonVariant::schur: {
          const std::optional<SchurFactor> f = SchurFactor::build(k, bits);
          if (f) {
            step = f->solve(grad);
          } else {
            ++rep.fallbacks;
            step = DoubleFactor(k).solve(grad);
          }
          break;
        }
        case NewtonVariant::minres:
          step = minres(k, grad, n + 1, bits);
          break;
        default:
          break;
      }
    }
    std::vector<Real>& phi = res.state.angles.phi;
    for (int j = 2; j <= n; ++j) phi[static_cast<size_t>(j - 1)] -= step[static_cast<size_t>(j - 2)];
    res.state.y1 -= step[static_cast<size_t>(n - 1)];
    res.state.y2 -= step[static_cast<size_t>(n)];
    const Real inc = norm2(step);
    rep.increments.push_back(inc);
    rep.iterations = it + 1;
    rep.final_increment_norm = inc;
    if (!finite(inc)) throw Error(ErrorKind::no_convergence, "Newton iterate is not finite");
    if (inc < tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw Error(ErrorKind::no_convergence,
                "increment norm " + to_decimal(rep.final_increment_norm, 6) + " after " +
                    std::to_string(rep.iterations) + " iterations for code " + code.to_string());
  }
  rep.final_kkt_residual = norm2(kkt_gradient(res.state, code));
  rep.perimeter = perimeter(res.state.angles);
  const std::vector<Real>& phi = res.state.angles.phi;
  for (int j = 0; j < n; ++j) {
    if (!(phi[static_cast<size_t>(j)] < phi[static_cast<size_t>(j + 1)])) rep.monotone = false;
  }
  return res;
}

}  // namespace maxperim
