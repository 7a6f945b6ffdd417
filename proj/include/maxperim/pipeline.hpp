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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

#include "maxperim/codes.hpp"
#include "maxperim/geometry.hpp"
#include "maxperim/phase1.hpp"
#include "maxperim/phase2.hpp"

namespace maxperim {

// --- two-phase solve -----------------------------------------------------

struct TwoPhaseOptions {
  unsigned precision_bits = 360;
  unsigned tol_bits = 320;
  std::optional<NewtonVariant> variant;  // default_variant(n) when unset
  int max_iter = 64;
  /// Skips the subset-sum search. Required above n = 64, where the best known
  /// quarter code is used when none is given.
  std::optional<QuarterCode> quarter;
  int jobs = 1;
  int suffix_bits = 0;
};

struct TwoPhaseResult {
  std::optional<SspResult> ssp;
  QuarterCode quarter;
  Code code;
  NewtonResult newton;
  PolygonSolution polygon;
};

/// Subset-sum search, quarter expansion, Newton solve and reconstruction with
/// the zonogon check. Throws invalid-n unless n = 2^s with 4 <= n <= 128.
TwoPhaseResult solve_two_phase(int n, const TwoPhaseOptions& options = {});

/// Newton solve plus reconstruction and zonogon check for a given code.
PolygonSolution solve_code(const Code& code, const NewtonOptions& options, NewtonResult* newton = nullptr);

// --- enumeration ---------------------------------------------------------

struct RankedEntry {
  Code canonical;
  std::string status;  // "ok", "not-monotone" or an error kind
  Real perimeter;      // valid unless the solve failed
  std::optional<PolygonSolution> polygon;  // absent for checkpointed entries
  int iterations = 0;
  NewtonVariant variant = NewtonVariant::schur;
  bool retried = false;
  bool from_checkpoint = false;
};

struct RankedSolutions {
  int n = 0;
  std::vector<RankedEntry> entries;  // "ok" first by perimeter, descending
};

inline constexpr int kDefaultEnumerationCap = 16;

struct EnumerateOptions {
  unsigned precision_bits = 360;
  unsigned tol_bits = 320;
  NewtonVariant variant = NewtonVariant::schur;
  int max_iter = 64;
  int jobs = 1;
  /// Lifts the cap from kDefaultEnumerationCap to kMaxEnumerationN.
  bool allow_large = false;
  /// JSON-lines file of completed codes; existing records are reused.
  std::optional<std::string> checkpoint_path;
};

/// $MAXPERIM_CHECKPOINT_DIR/enumerate-n<n>.jsonl when the variable is set.
std::optional<std::string> default_checkpoint_path(int n);

/// Solves every canonical code on a worker pool and ranks the results.
/// Codes that fail are retried once with the double-factor variant, then
/// recorded with their error kind. Throws too-large above the cap.
RankedSolutions enumerate_and_solve(int n, const EnumerateOptions& options = {});

// --- algebraic checks ----------------------------------------------------

using BigInt = boost::multiprecision::mpz_int;

struct IntegerPolynomial {
  std::string name;
  std::vector<BigInt> coefficients;  // ascending degree

  int degree() const { return static_cast<int>(coefficients.size()) - 1; }
  /// FNV-1a over the decimal coefficients joined by ','.
  std::uint64_t digest() const;
};

/// Degree-48 integer polynomial whose root is the squared maximal octagon
/// perimeter; throws parse-error if the embedded table fails its digest.
const IntegerPolynomial& octagon_perimeter_polynomial();
/// 2t^6 - 18t^5 + 57t^4 - 78t^3 + 46t^2 - 12t + 1.
const IntegerPolynomial& equilateral_octagon_polynomial();
/// Looks up "q8"/"P8" or "E8". Throws parse-error.
const IntegerPolynomial& polynomial_by_name(std::string_view name);

struct RootReport {
  Real value;
  Real abs_value;       // |p(value)|
  Real abs_derivative;  // |p'(value)|
  Real backward_error;  // |p| / |p'|
  bool confirmed = false;
};

/// Horner evaluation with exact integer coefficients at the value's
/// precision; confirmed when the backward error is below 2^(32 - tol_bits).
RootReport verify_polynomial_root(const IntegerPolynomial& poly, const Real& value, unsigned tol_bits = 320);

struct DualRootReport {
  RootReport at_value;
  RootReport at_square;
  /// "value", "square", "both" or "neither".
  std::string annihilated_by;
};

/// Evaluates at both x and x^2.
DualRootReport dual_root_check(const IntegerPolynomial& poly, const Real& value, unsigned tol_bits = 320);

/// Side length of the maximal-perimeter equilateral small octagon, from a
/// Newton solve of its rigid unit-distance configuration (not from E8).
Real equilateral_octagon_side(unsigned precision_bits);

struct ClosedForm {
  /// value = constant + sum coefficient * sin(pi / denominator)
  long long constant = 0;
  std::vector<std::pair<long long, long long>> sine_terms;
  std::string text;
};

/// Parses sums like "1 + 6 sin(π/18) + 8 sin(pi/24)". Throws parse-error.
ClosedForm parse_closed_form(std::string_view text);

Real evaluate_closed_form(const ClosedForm& form);

struct ClosedFormReport {
  Real closed_value;
  Real difference;
  bool match = false;
};

/// Compares within 2^(16 - tol_bits) at the value's precision.
ClosedFormReport closed_form_check(std::string_view expr, const Real& value, unsigned tol_bits = 320);

}  // namespace maxperim
