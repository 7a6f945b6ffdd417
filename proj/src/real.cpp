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

#include "maxperim/real.hpp"

#include <cmath>
#include <cstdlib>
#include <memory>

#include <mpfr.h>

#include "maxperim/error.hpp"

namespace maxperim {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_code: return "invalid-code";
    case ErrorKind::invalid_composition: return "invalid-composition";
    case ErrorKind::invalid_divisor: return "invalid-divisor";
    case ErrorKind::invalid_n: return "invalid-n";
    case ErrorKind::too_large: return "too-large";
    case ErrorKind::overflow_detected: return "overflow-detected";
    case ErrorKind::dimension_mismatch: return "dimension-mismatch";
    case ErrorKind::no_convergence: return "no-convergence";
    case ErrorKind::singular_system: return "singular-system";
    case ErrorKind::degenerate_angles: return "degenerate-angles";
    case ErrorKind::not_closed: return "not-closed";
    case ErrorKind::not_convex: return "not-convex";
    case ErrorKind::not_small: return "not-small";
    case ErrorKind::code_mismatch: return "code-mismatch";
    case ErrorKind::unverified_record: return "unverified-record";
    case ErrorKind::parse_error: return "parse-error";
  }
  return "unknown";
}

namespace {

unsigned bits_of_digits10(unsigned d10) {
  return static_cast<unsigned>(boost::multiprecision::detail::digits10_2_2(d10));
}

}  // namespace

unsigned digits10_for_bits(unsigned bits) {
  unsigned d = bits * 301u / 1000u;
  if (d == 0) d = 1;
  while (d > 1 && bits_of_digits10(d - 1) >= bits) --d;
  while (bits_of_digits10(d) < bits) ++d;
  return d;
}

unsigned effective_bits(unsigned bits) { return bits_of_digits10(digits10_for_bits(bits)); }

unsigned precision_of(const Real& x) {
  return static_cast<unsigned>(mpfr_get_prec(x.backend().data()));
}

PrecisionScope::PrecisionScope(unsigned bits)
    : saved_digits10_(Real::default_precision()), bits_(effective_bits(bits)) {
  const unsigned d10 = digits10_for_bits(bits);
  if (d10 != saved_digits10_) Real::default_precision(d10);
}

PrecisionScope::~PrecisionScope() {
  if (Real::default_precision() != saved_digits10_) Real::default_precision(saved_digits10_);
}

Real pi() {
  Real r;
  mpfr_const_pi(r.backend().data(), MPFR_RNDN);
  return r;
}

Real ldexp2(long e) {
  Real r = 1;
  mpfr_mul_2si(r.backend().data(), r.backend().data(), e, MPFR_RNDN);
  return r;
}

int decimal_digits_for_bits(unsigned bits) {
  return static_cast<int>(std::ceil(bits * 0.302)) + 2;
}

std::string to_decimal(const Real& x, int digits) {
  const mpfr_srcptr v = x.backend().data();
  if (mpfr_nan_p(v)) return "nan";
  if (mpfr_inf_p(v)) return mpfr_signbit(v) ? "-inf" : "inf";
  if (mpfr_zero_p(v)) return "0";

  mpfr_exp_t exp10 = 0;
  std::unique_ptr<char, void (*)(char*)> raw(
      mpfr_get_str(nullptr, &exp10, 10, static_cast<size_t>(digits), v, MPFR_RNDN), mpfr_free_str);
  std::string mant(raw.get());
  std::string sign;
  if (!mant.empty() && mant.front() == '-') {
    sign = "-";
    mant.erase(0, 1);
  }
  // value = 0.mant * 10^exp10
  const long point = static_cast<long>(exp10);
  if (point > -4 && point <= 6) {
    std::string out = sign;
    if (point <= 0) {
      out += "0.";
      out.append(static_cast<size_t>(-point), '0');
      out += mant;
    } else {
      out += mant.substr(0, static_cast<size_t>(point));
      out += '.';
      out += mant.substr(static_cast<size_t>(point));
    }
    return out;
  }
  std::string out = sign;
  out += mant[0];
  out += '.';
  out += mant.substr(1);
  const long e = point - 1;
  out += e < 0 ? "e-" : "e+";
  const std::string mag = std::to_string(std::labs(e));
  if (mag.size() < 2) out += '0';
  out += mag;
  return out;
}

Real parse_real(std::string_view text) {
  Real r;
  const std::string s(text);
  char* end = nullptr;
  mpfr_strtofr(r.backend().data(), s.c_str(), &end, 10, MPFR_RNDN);
  if (end == s.c_str() || *end != '\0') {
    throw Error(ErrorKind::parse_error, "not a decimal number: '" + s + "'");
  }
  return r;
}

double to_double(const Real& x) { return mpfr_get_d(x.backend().data(), MPFR_RNDN); }

Real Complex::abs() const { return boost::multiprecision::hypot(re, im); }

Real Complex::arg() const { return boost::multiprecision::atan2(im, re); }

Complex Complex::polar(const Real& angle) {
  return {boost::multiprecision::cos(angle), boost::multiprecision::sin(angle)};
}

}  // namespace maxperim
