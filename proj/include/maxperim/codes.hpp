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

// Combinatorial codes of small polygons.
//
// A code is an antisymmetric sign sequence c_1..c_{2n} with c_{n+j} = -c_j.
// It records, for every side of the generated zonogon, whether the side is a
// side of P (+1) or of -P (-1). Only the first half is stored; the cyclic
// operations materialize the full sequence on demand. Codes are considered up
// to the dihedral group acting on the length-2n cycle.

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace maxperim {

using Sign = std::int8_t;

class Code {
 public:
  Code() = default;
  /// `half` holds c_1..c_n, each +1 or -1.
  explicit Code(std::vector<Sign> half);

  /// Parses a half code written as '+'/'-' characters, e.g. "+--+-++-".
  static Code parse(std::string_view text);
  /// Parses a full length-2n code and checks antisymmetry.
  static Code parse_full(std::string_view text);

  int n() const { return static_cast<int>(half_.size()); }
  std::span<const Sign> half() const { return half_; }

  /// c_{j+1} for 0-based j in [0, 2n), wrapping cyclically.
  Sign full_at(long j) const;
  std::vector<Sign> full() const;

  std::string to_string() const;
  std::string full_string() const;

  /// Longest run of equal signs in the cyclic full code.
  int max_cyclic_run() const;
  /// Run bound of the zonogon view: no run longer than n-2.
  bool admissible() const { return n() >= 3 && max_cyclic_run() <= n() - 2; }

  /// The code obtained by negating every sign (rotation of the full code by n).
  Code negated() const;

  friend bool operator==(const Code&, const Code&) = default;
  friend std::strong_ordering operator<=>(const Code& a, const Code& b);

 private:
  std::vector<Sign> half_;
};

/// First n/2 signs of a code with the axial symmetry c_{n-j+1} = -c_j.
class QuarterCode {
 public:
  QuarterCode() = default;
  QuarterCode(int n, std::vector<Sign> entries);
  static QuarterCode parse(int n, std::string_view text);

  int n() const { return n_; }
  std::span<const Sign> entries() const { return entries_; }
  std::string to_string() const;
  QuarterCode negated() const;

  friend bool operator==(const QuarterCode&, const QuarterCode&) = default;

 private:
  int n_ = 0;
  std::vector<Sign> entries_;
};

/// Minus-run lengths of the full cyclic code.
struct Composition {
  std::vector<int> parts;

  int total() const;
  std::string to_string() const;  // "2,1,2,1,2"
  static Composition parse(std::string_view text);

  friend bool operator==(const Composition&, const Composition&) = default;
};

/// Lexicographically smallest representative ('+' < '-') of the dihedral
/// orbit of the full code. Throws invalid-code if the run bound fails.
Code canonicalize(const Code& code);

/// Canonical form without the run-bound check.
Code canonical_form(const Code& code);

bool equivalent(const Code& a, const Code& b);

/// Minus-run lengths, as the lexicographically smallest cyclic rotation or
/// reflection of the run sequence.
Composition code_to_composition(const Code& code);

/// Lexicographically smallest rotation/reflection of a composition.
Composition canonical_composition(const Composition& comp);

/// Rebuilds a code from minus-run lengths: plus-runs are the composition
/// read from its center entry. Throws invalid-composition unless the parts are
/// positive, sum to n and their count is odd and at least 3.
Code composition_to_code(const Composition& comp, int n);

/// c_j = (-1)^ceil(j d / n); its zonogon residual vanishes.
/// Throws invalid-divisor unless d is odd, d >= 3 and d | n.
Code odd_divisor_code(int n, int d);

/// Half code of length n with c_{n-j+1} = -c_j.
Code expand_quarter(const QuarterCode& quarter);

/// True if the code has the axial symmetry c_{n-j+1} = -c_j.
bool has_axial_symmetry(const Code& code);

// --- enumeration ---------------------------------------------------------

/// Restricts enumeration to half codes whose first `prefix_bits` signs match
/// `prefix` (bit i set = c_{i+1} is '-'). The 2^prefix_bits partitions are
/// disjoint and cover every class.
struct EnumerationPartition {
  int prefix_bits = 0;
  std::uint64_t prefix = 0;
};

struct EnumerationOptions {
  EnumerationPartition partition;
  /// When false, codes violating the run bound are emitted too (this counts
  /// all self-dual bracelets, including the single one with a run of n).
  bool enforce_run_bound = true;
};

/// Largest n supported by the streaming enumerator.
inline constexpr int kMaxEnumerationN = 32;

/// Streams one canonical code per equivalence class to `sink`; returns the
/// count. Memory is O(n). Throws too-large for n > kMaxEnumerationN and
/// invalid-n for n < 3.
std::uint64_t enumerate_codes(int n, const std::function<void(const Code&)>& sink,
                              const EnumerationOptions& options = {});

/// Same traversal as enumerate_codes without materializing Code values.
std::uint64_t count_codes(int n, const EnumerationOptions& options = {});

}  // namespace maxperim
