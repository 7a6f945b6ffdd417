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

// Self-dual bracelet generation.
//
// A canonical code is the lexicographically smallest string in its dihedral
// orbit, with '+' = 0 and '-' = 1. Its first half h determines the rest
// (second half = complement of h), so the search runs over h only:
//
//   * h must be a prenecklace (Fredricksen-Kessler-Maiorana test on the
//     period p), since every prefix of a necklace is one;
//   * the string opens with its longest 0-run L0, and complementing maps
//     0-runs onto 1-runs, so no 1-run may exceed L0;
//   * h ends in 0, otherwise its trailing 1-run merges with the leading
//     1-run of the complement and exceeds L0.
//
// Survivors are checked against all 2n rotations and 2n reflections of the
// full 2n-bit word.

#include <algorithm>
#include <array>
#include <bit>

#include "maxperim/codes.hpp"
#include "maxperim/error.hpp"

namespace maxperim {

namespace {

std::uint64_t reverse_bits(std::uint64_t x) {
  x = ((x >> 1) & 0x5555555555555555ull) | ((x & 0x5555555555555555ull) << 1);
  x = ((x >> 2) & 0x3333333333333333ull) | ((x & 0x3333333333333333ull) << 2);
  x = ((x >> 4) & 0x0F0F0F0F0F0F0F0Full) | ((x & 0x0F0F0F0F0F0F0F0Full) << 4);
  x = ((x >> 8) & 0x00FF00FF00FF00FFull) | ((x & 0x00FF00FF00FF00FFull) << 8);
  x = ((x >> 16) & 0x0000FFFF0000FFFFull) | ((x & 0x0000FFFF0000FFFFull) << 16);
  return (x >> 32) | (x << 32);
}

class BraceletSearch {
 public:
  BraceletSearch(int n, const EnumerationOptions& options, const std::function<void(const Code&)>* sink)
      : n_(n), len_(2 * n), options_(options), sink_(sink) {
    mask_ = len_ == 64 ? ~0ull : ((1ull << len_) - 1);
  }

  std::uint64_t run() {
    extend(0, 1, 0, false, 0);
    return count_;
  }

 private:
  // t: next position; p: prenecklace period; l0: leading 0-run length;
  // fixed: a 1 has appeared (l0 is final); ones: length of the current 1-run.
  void extend(int t, int p, int l0, bool fixed, int ones) {
    if (t == n_) {
      leaf();
      return;
    }
    for (int b = 0; b <= 1; ++b) {
      if (t < options_.partition.prefix_bits &&
          static_cast<int>((options_.partition.prefix >> t) & 1u) != b) {
        continue;
      }
      if (t == 0 && b == 1) continue;
      if (t == n_ - 1 && b == 1) continue;
      int np = p;
      if (t > 0) {
        const int prev = h_[static_cast<size_t>(t - p)];
        if (b < prev) continue;
        np = b == prev ? p : t + 1;
      }
      int nl0 = l0;
      bool nfixed = fixed;
      int nones = 0;
      if (!fixed) {
        if (b == 0) {
          nl0 = l0 + 1;
          if (options_.enforce_run_bound && nl0 > n_ - 2) continue;
        } else {
          nfixed = true;
          nones = 1;
        }
      } else if (b == 1) {
        nones = ones + 1;
      }
      if (nfixed && nones > nl0) continue;
      h_[static_cast<size_t>(t)] = static_cast<std::uint8_t>(b);
      extend(t + 1, np, nl0, nfixed, nones);
    }
  }

  void leaf() {
    std::uint64_t word = 0;
    for (int i = 0; i < n_; ++i) word = (word << 1) | h_[static_cast<size_t>(i)];
    for (int i = 0; i < n_; ++i) word = (word << 1) | (h_[static_cast<size_t>(i)] ^ 1u);
    for (int k = 1; k < len_; ++k) {
      const std::uint64_t r = ((word << k) | (word >> (len_ - k))) & mask_;
      if (r < word) return;
    }
    const std::uint64_t rev = reverse_bits(word) >> (64 - len_);
    if (rev < word) return;
    for (int k = 1; k < len_; ++k) {
      const std::uint64_t r = ((rev << k) | (rev >> (len_ - k))) & mask_;
      if (r < word) return;
    }
    ++count_;
    if (sink_ != nullptr && *sink_) {
      std::vector<Sign> half(static_cast<size_t>(n_));
      for (int i = 0; i < n_; ++i) half[static_cast<size_t>(i)] = h_[static_cast<size_t>(i)] ? -1 : 1;
      (*sink_)(Code(std::move(half)));
    }
  }

  int n_;
  int len_;
  std::uint64_t mask_;
  EnumerationOptions options_;
  const std::function<void(const Code&)>* sink_;
  std::array<std::uint8_t, kMaxEnumerationN> h_{};
  std::uint64_t count_ = 0;
};

void check_n(int n) {
  if (n < 3) throw Error(ErrorKind::invalid_n, "enumeration needs n >= 3");
  if (n > kMaxEnumerationN) {
    throw Error(ErrorKind::too_large, "enumeration supports n <= " + std::to_string(kMaxEnumerationN));
  }
}

}  // namespace

std::uint64_t enumerate_codes(int n, const std::function<void(const Code&)>& sink,
                              const EnumerationOptions& options) {
  check_n(n);
  return BraceletSearch(n, options, &sink).run();
}

std::uint64_t count_codes(int n, const EnumerationOptions& options) {
  check_n(n);
  return BraceletSearch(n, options, nullptr).run();
}

}  // namespace maxperim
