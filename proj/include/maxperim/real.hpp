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

#include <string>
#include <string_view>

#include <boost/multiprecision/mpfr.hpp>

namespace maxperim {

/// Arbitrary-precision real. Values take the working precision that is active
/// when they are created (see PrecisionScope); copies keep their source precision.
using Real = boost::multiprecision::mpfr_float;

/// Smallest digits10 setting whose MPFR bit precision is at least `bits`.
unsigned digits10_for_bits(unsigned bits);

/// MPFR bit precision that `PrecisionScope(bits)` actually installs.
unsigned effective_bits(unsigned bits);

/// Bit precision of a value.
unsigned precision_of(const Real& x);

/// Installs a working precision for newly created Real values and restores
/// the previous one on destruction. The setting is process-wide: concurrent
/// workers must all run under the same precision, which is only written when
/// it actually changes.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

  unsigned bits() const { return bits_; }

 private:
  unsigned saved_digits10_;
  unsigned bits_;
};

/// pi at the current working precision.
Real pi();

/// 2^e at the current working precision (exact).
Real ldexp2(long e);

/// Number of significant decimal digits that round-trips `bits` bits.
int decimal_digits_for_bits(unsigned bits);

/// Round-to-nearest decimal rendering with `digits` significant digits.
/// Values with magnitude in [1e-4, 1e6) are written in positional notation,
/// everything else as d.ddd...e±XX.
std::string to_decimal(const Real& x, int digits);

/// Parses a decimal string at the current working precision.
Real parse_real(std::string_view text);

/// Rounds to the nearest double.
double to_double(const Real& x);

/// Simple complex value over Real; std::complex is unspecified for non-builtin types.
struct Complex {
  Real re;
  Real im;

  Complex operator+(const Complex& o) const { return {re + o.re, im + o.im}; }
  Complex operator-(const Complex& o) const { return {re - o.re, im - o.im}; }
  Complex operator*(const Complex& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  Complex operator*(const Real& s) const { return {re * s, im * s}; }
  Complex conj() const { return {re, -im}; }
  Real abs() const;
  Real arg() const;

  static Complex polar(const Real& angle);  // exp(i*angle)
};

}  // namespace maxperim
