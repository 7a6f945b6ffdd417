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

// Code selection at the regular 2n-gon angles.
//
// For a code c the closure defect at phi*_j = j pi / n is
// r(c) = (xi - 1) sum_j c_j xi^j with xi = exp(i pi / n). Codes with the axial
// symmetry c_{n-j+1} = -c_j reduce |r| to a subset-sum problem in the
// weights w_j = cos((j - 1/2) pi / n), j = 1..n/2:
//
//     maximize w^T x  subject to  w^T x <= (1/2) sum w,  x in {0,1}^{n/2},
//
// with c_j = 1 - 2 x_j. The gap (1/2) sum w - w^T x equals w^T c / 2.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "maxperim/codes.hpp"
#include "maxperim/real.hpp"

namespace maxperim {

using int128 = __int128;
using uint128 = unsigned __int128;

std::string int128_to_string(int128 v);

struct SspInstance {
  int n = 0;
  std::vector<Real> weights;  // w_1..w_{n/2}, strictly decreasing, positive
  Real budget;                // (1/2) sum w
  /// round(w_j * 2^128 / n); their sum is below 2^127.
  std::vector<int128> fixed_weights;
  int128 fixed_total = 0;
  std::string substitution = "c_j = 1 - 2 x_j";
};

/// Throws invalid-n unless n = 2^s with 4 <= n <= 128.
SspInstance build_ssp(int n, unsigned precision_bits = 256);

enum class SspArithmetic { fixed128, floating };

std::string_view to_string(SspArithmetic a);
SspArithmetic parse_arithmetic(std::string_view text);

struct SspResult {
  int n = 0;
  QuarterCode quarter;
  std::vector<std::uint8_t> x;
  /// fixed128 only: T - 2 S with S the scaled w^T x; gap = numerator * n / 2^129.
  int128 gap_numerator = 0;
  /// floating only: budget - w^T x in long double.
  long double gap_float = 0.0L;
  Real gap;
  std::uint64_t nodes = 0;
  double seconds = 0.0;
  SspArithmetic arithmetic = SspArithmetic::fixed128;
  std::string suffix;
  bool feasible = false;
};

/// Exact optimum of the subset-sum problem over all x consistent with
/// `suffix`. The suffix fixes the last k entries x_{m-k+1}..x_m (m = n/2);
/// its characters are '0'/'+' for x = 0 and '1'/'-' for x = 1. Among equal
/// gaps the lexicographically smallest quarter code wins.
/// Throws too-large for fixed128 with n/2 > 64, invalid-code for a bad suffix.
SspResult solve_ssp(const SspInstance& inst, SspArithmetic arithmetic = SspArithmetic::fixed128,
                    std::string_view suffix = {});

/// The k smallest gaps in increasing order (fixed128), ties by quarter code.
/// The pruning only cuts subtrees that cannot beat the current k-th best.
std::vector<SspResult> solve_ssp_top(const SspInstance& inst, int k);

/// The 2^suffix_bits suffixes "00..0" .. "11..1". Throws invalid-n outside [0, 8].
std::vector<std::string> parallel_split(const SspInstance& inst, int suffix_bits);

/// Minimum gap over feasible results; ties go to the smaller quarter code.
/// Node counts are summed and wall times maximized.
SspResult merge_ssp_results(std::span<const SspResult> parts);

/// Solves every suffix of parallel_split on `jobs` worker threads and merges.
SspResult solve_ssp_parallel(const SspInstance& inst, SspArithmetic arithmetic, int suffix_bits,
                             int jobs);

/// r(c) = (xi - 1) sum_{j=1}^n c_j xi^j at `precision_bits`.
Complex residual(const Code& code, unsigned precision_bits);

/// Same quantity summed side by side: sum_j c_j (xi^{j+1} - xi^j).
Complex residual_by_sides(const Code& code, unsigned precision_bits);

/// Exact gap of a quarter code, w^T c / 2, at the working precision.
Real quarter_gap(const SspInstance& inst, const QuarterCode& quarter);

struct GeneralResidualResult {
  Code canonical;            // canonical form of the minimizer
  Code normalized;           // orbit member with arg r(c) in [0, pi/(2n)]
  Real modulus;              // |sum_j c_j xi^j|
  std::uint64_t examined = 0;
};

/// Exhaustive minimization of |sum c_j xi^j| over admissible half codes with
/// c_1 = +1, without assuming axial symmetry. Ties go to the smaller canonical
/// code. Throws too-large for n > 20 and invalid-n for n < 3.
GeneralResidualResult minimize_residual_general(int n, unsigned precision_bits);

/// Best known quarter codes for n = 4, 8, ..., 128; n = 128 is not known to be optimal.
std::optional<QuarterCode> published_quarter_code(int n);

}  // namespace maxperim
