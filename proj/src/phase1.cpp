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


#include "maxperim/phase1.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <thread>

#include <mpfr.h>

#include "maxperim/error.hpp"

namespace maxperim {

std::string int128_to_string(int128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  uint128 u = neg ? static_cast<uint128>(0) - static_cast<uint128>(v) : static_cast<uint128>(v);
  std::string digits;
  while (u != 0) {
    digits += static_cast<char>('0' + static_cast<int>(u % 10));
    u /= 10;
  }
  if (neg) digits += '-';
  std::reverse(digits.begin(), digits.end());
  return digits;
}

std::string_view to_string(SspArithmetic a) {
  return a == SspArithmetic::fixed128 ? "int128" : "float";
}

SspArithmetic parse_arithmetic(std::string_view text) {
  if (text == "int128" || text == "fixed128") return SspArithmetic::fixed128;
  if (text == "float") return SspArithmetic::floating;
  throw Error(ErrorKind::parse_error, "unknown arithmetic mode '" + std::string(text) + "'");
}

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_exact(int n) {
  int s = 0;
  while ((1 << s) < n) ++s;
  return s;
}

// round(x) for 0 <= x < 2^127, with x exact enough in the working precision.
int128 round_to_int128(const Real& x) {
  Real r = boost::multiprecision::round(x);
  Real hi = boost::multiprecision::floor(ldexp2(-64) * r);
  Real lo = r - hi * ldexp2(64);
  const auto h = static_cast<std::uint64_t>(mpfr_get_uj(hi.backend().data(), MPFR_RNDN));
  const auto l = static_cast<std::uint64_t>(mpfr_get_uj(lo.backend().data(), MPFR_RNDN));
  return static_cast<int128>((static_cast<uint128>(h) << 64) | l);
}

Real int128_to_real(int128 v) {
  const bool neg = v < 0;
  uint128 u = neg ? static_cast<uint128>(0) - static_cast<uint128>(v) : static_cast<uint128>(v);
  Real hi = static_cast<unsigned long long>(u >> 64);
  Real lo = static_cast<unsigned long long>(u & ~std::uint64_t{0});
  Real r = hi * ldexp2(64) + lo;
  return neg ? Real(-r) : r;
}

int128 checked_add(int128 a, int128 b) {
  int128 out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw Error(ErrorKind::overflow_detected, "128-bit accumulation overflowed");
  }
  return out;
}

struct Suffix {
  std::vector<std::uint8_t> bits;
};

Suffix parse_suffix(std::string_view text, int m) {
  Suffix s;
  for (char ch : text) {
    if (ch == '0' || ch == '+') {
      s.bits.push_back(0);
    } else if (ch == '1' || ch == '-') {
      s.bits.push_back(1);
    } else {
      throw Error(ErrorKind::invalid_code, std::string("bad suffix character '") + ch + "'");
    }
  }
  if (static_cast<int>(s.bits.size()) >= m) {
    throw Error(ErrorKind::invalid_code, "suffix must be shorter than n/2");
  }
  return s;
}

// Depth-first branch and bound over x_0..x_{free-1}; x = 0 is explored first
// so the first optimum reached is the lexicographically smallest.
template <typename Num>
class SspSearch {
 public:
  SspSearch(std::vector<Num> w, Num total, int free, Num fixed_sum,
            bool (*fits)(Num, Num), Num (*add)(Num, Num))
      : w_(std::move(w)), total_(total), free_(free), fits_(fits), add_(add),
        x_(w_.size(), 0), best_x_(w_.size(), 0) {
    rest_.assign(static_cast<size_t>(free_) + 1, Num(0));
    for (int j = free_ - 1; j >= 0; --j) rest_[static_cast<size_t>(j)] = add_(rest_[static_cast<size_t>(j) + 1], w_[static_cast<size_t>(j)]);
    start_ = fixed_sum;
  }

  bool run(const std::vector<std::uint8_t>& suffix_bits) {
    for (size_t i = 0; i < suffix_bits.size(); ++i) {
      x_[static_cast<size_t>(free_) + i] = suffix_bits[i];
    }
    if (!fits_(start_, total_)) return false;
    visit(0, start_);
    return found_;
  }

  Num best() const { return best_; }
  const std::vector<std::uint8_t>& best_x() const { return best_x_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  void record(Num s, int fill_from) {
    best_ = s;
    found_ = true;
    best_x_ = x_;
    for (int j = fill_from; j < free_; ++j) best_x_[static_cast<size_t>(j)] = 1;
  }

  void visit(int j, Num s) {
    ++nodes_;
    const Num reach = add_(s, rest_[static_cast<size_t>(j)]);
    if (found_ && !(best_ < reach)) return;
    if (fits_(reach, total_)) {
      // taking every remaining item is feasible and strictly best here
      record(reach, j);
      return;
    }
    if (j == free_) {
      record(s, free_);
      return;
    }
    x_[static_cast<size_t>(j)] = 0;
    visit(j + 1, s);
    const Num with = add_(s, w_[static_cast<size_t>(j)]);
    if (fits_(with, total_)) {
      x_[static_cast<size_t>(j)] = 1;
      visit(j + 1, with);
      x_[static_cast<size_t>(j)] = 0;
    }
  }

  std::vector<Num> w_;
  Num total_;
  int free_;
  bool (*fits_)(Num, Num);
  Num (*add_)(Num, Num);
  std::vector<Num> rest_;
  Num start_{};
  std::vector<std::uint8_t> x_;
  std::vector<std::uint8_t> best_x_;
  Num best_{};
  bool found_ = false;
  std::uint64_t nodes_ = 0;
};

// 2 s <= total, i.e. s <= total - s without forming 2 s.
bool fits_fixed(int128 s, int128 total) { return s <= total - s; }
int128 add_fixed(int128 a, int128 b) { return checked_add(a, b); }
bool fits_float(long double s, long double total) { return s <= total - s; }
long double add_float(long double a, long double b) { return a + b; }

QuarterCode quarter_from_x(int n, const std::vector<std::uint8_t>& x) {
  std::vector<Sign> e(x.size());
  for (size_t j = 0; j < x.size(); ++j) e[j] = x[j] ? -1 : 1;
  return QuarterCode(n, std::move(e));
}

bool quarter_less(const QuarterCode& a, const QuarterCode& b) {
  // '+' < '-'
  for (size_t j = 0; j < a.entries().size(); ++j) {
    if (a.entries()[j] != b.entries()[j]) return a.entries()[j] > b.entries()[j];
  }
  return false;
}

// Everything except the Real gap; safe to run on worker threads.
SspResult solve_core(const SspInstance& inst, SspArithmetic arithmetic, std::string_view suffix,
                     const std::vector<long double>& float_weights) {
  const int m = inst.n / 2;
  const Suffix suf = parse_suffix(suffix, m);
  const int free = m - static_cast<int>(suf.bits.size());
  const auto t0 = std::chrono::steady_clock::now();

  SspResult out;
  out.n = inst.n;
  out.arithmetic = arithmetic;
  out.suffix = std::string(suffix);

  if (arithmetic == SspArithmetic::fixed128) {
    int128 fixed_sum = 0;
    for (size_t i = 0; i < suf.bits.size(); ++i) {
      if (suf.bits[i]) fixed_sum = checked_add(fixed_sum, inst.fixed_weights[static_cast<size_t>(free) + i]);
    }
    SspSearch<int128> search(inst.fixed_weights, inst.fixed_total, free, fixed_sum, fits_fixed, add_fixed);
    out.feasible = search.run(suf.bits);
    out.nodes = search.nodes();
    if (out.feasible) {
      out.x = search.best_x();
      out.gap_numerator = inst.fixed_total - 2 * search.best();
    }
  } else {
    long double total = 0.0L;
    for (long double w : float_weights) total += w;
    long double fixed_sum = 0.0L;
    for (size_t i = 0; i < suf.bits.size(); ++i) {
      if (suf.bits[i]) fixed_sum += float_weights[static_cast<size_t>(free) + i];
    }
    SspSearch<long double> search(float_weights, total, free, fixed_sum, fits_float, add_float);
    out.feasible = search.run(suf.bits);
    out.nodes = search.nodes();
    if (out.feasible) {
      out.x = search.best_x();
      out.gap_float = total / 2.0L - search.best();
    }
  }
  if (out.feasible) out.quarter = quarter_from_x(inst.n, out.x);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

std::vector<long double> float_weights_of(const SspInstance& inst) {
  std::vector<long double> w;
  const long double pi_ld = 3.141592653589793238462643383279502884L;
  for (int j = 1; j <= inst.n / 2; ++j) {
    w.push_back(std::cos((static_cast<long double>(j) - 0.5L) * pi_ld / static_cast<long double>(inst.n)));
  }
  return w;
}

void fill_gap(const SspInstance& inst, SspResult& r) {
  if (!r.feasible) {
    r.gap = Real(-1);
    return;
  }
  if (r.arithmetic == SspArithmetic::fixed128) {
    r.gap = int128_to_real(r.gap_numerator) * inst.n * ldexp2(-129);
  } else {
    r.gap = Real(0);
    mpfr_set_ld(r.gap.backend().data(), r.gap_float, MPFR_RNDN);
  }
}

}  // namespace

SspInstance build_ssp(int n, unsigned precision_bits) {
  if (!is_power_of_two(n) || n < 4 || n > 128) {
    throw Error(ErrorKind::invalid_n, "subset-sum instance needs n = 2^s with 4 <= n <= 128");
  }
  SspInstance inst;
  inst.n = n;
  const int m = n / 2;
  {
    // weights are rounded to the 2^128/n grid from at least 192 bits
    PrecisionScope scope(std::max(precision_bits, 192u));
    const Real p = pi();
    const Real scale = ldexp2(128 - log2_exact(n));
    for (int j = 1; j <= m; ++j) {
      const Real w = boost::multiprecision::cos((Real(j) - Real(0.5)) * p / n);
      inst.fixed_weights.push_back(round_to_int128(w * scale));
      inst.fixed_total = checked_add(inst.fixed_total, inst.fixed_weights.back());
    }
  }
  PrecisionScope scope(precision_bits);
  const Real p = pi();
  Real sum = 0;
  for (int j = 1; j <= m; ++j) {
    inst.weights.push_back(boost::multiprecision::cos((Real(j) - Real(0.5)) * p / n));
    sum += inst.weights.back();
  }
  inst.budget = sum / 2;
  return inst;
}

SspResult solve_ssp(const SspInstance& inst, SspArithmetic arithmetic, std::string_view suffix) {
  if (arithmetic == SspArithmetic::fixed128 && inst.n / 2 > 64) {
    throw Error(ErrorKind::too_large, "exhaustive 128-bit search supports n/2 <= 64");
  }
  SspResult r = solve_core(inst, arithmetic, suffix, float_weights_of(inst));
  fill_gap(inst, r);
  return r;
}

std::vector<SspResult> solve_ssp_top(const SspInstance& inst, int k) {
  if (k < 1) throw Error(ErrorKind::invalid_n, "k must be positive");
  if (inst.n / 2 > 64) throw Error(ErrorKind::too_large, "exhaustive 128-bit search supports n/2 <= 64");
  const int m = inst.n / 2;
  const std::vector<int128>& w = inst.fixed_weights;
  std::vector<int128> rest(static_cast<size_t>(m) + 1, 0);
  for (int j = m - 1; j >= 0; --j) rest[static_cast<size_t>(j)] = checked_add(rest[static_cast<size_t>(j) + 1], w[static_cast<size_t>(j)]);

  // best sums in decreasing order; DFS order makes earlier finds lexicographically smaller
  std::vector<std::pair<int128, std::vector<std::uint8_t>>> top;
  std::vector<std::uint8_t> x(static_cast<size_t>(m), 0);
  std::uint64_t nodes = 0;
  const auto t0 = std::chrono::steady_clock::now();
  auto admit = [&](int128 s) {
    auto pos = std::find_if(top.begin(), top.end(), [&](const auto& e) { return e.first < s; });
    top.insert(pos, {s, x});
    if (static_cast<int>(top.size()) > k) top.pop_back();
  };
  auto visit = [&](auto&& self, int j, int128 s) -> void {
    ++nodes;
    if (static_cast<int>(top.size()) == k && !(top.back().first < s + rest[static_cast<size_t>(j)])) return;
    if (j == m) {
      admit(s);
      return;
    }
    x[static_cast<size_t>(j)] = 0;
    self(self, j + 1, s);
    const int128 with = s + w[static_cast<size_t>(j)];
    if (fits_fixed(with, inst.fixed_total)) {
      x[static_cast<size_t>(j)] = 1;
      self(self, j + 1, with);
      x[static_cast<size_t>(j)] = 0;
    }
  };
  visit(visit, 0, 0);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::vector<SspResult> out;
  for (const auto& [s, bits] : top) {
    SspResult r;
    r.n = inst.n;
    r.x = bits;
    r.quarter = quarter_from_x(inst.n, bits);
    r.gap_numerator = inst.fixed_total - 2 * s;
    r.nodes = nodes;
    r.seconds = seconds;
    r.feasible = true;
    fill_gap(inst, r);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::string> parallel_split(const SspInstance& inst, int suffix_bits) {
  if (suffix_bits < 0 || suffix_bits > 8 || suffix_bits >= inst.n / 2) {
    throw Error(ErrorKind::invalid_n, "suffix_bits must lie in [0, 8] and below n/2");
  }
  std::vector<std::string> out;
  for (int v = 0; v < (1 << suffix_bits); ++v) {
    std::string s(static_cast<size_t>(suffix_bits), '0');
    for (int b = 0; b < suffix_bits; ++b) {
      if ((v >> (suffix_bits - 1 - b)) & 1) s[static_cast<size_t>(b)] = '1';
    }
    out.push_back(s);
  }
  return out;
}

SspResult merge_ssp_results(std::span<const SspResult> parts) {
  if (parts.empty()) throw Error(ErrorKind::dimension_mismatch, "nothing to merge");
  const SspResult* best = nullptr;
  std::uint64_t nodes = 0;
  double seconds = 0.0;
  for (const SspResult& r : parts) {
    nodes += r.nodes;
    seconds = std::max(seconds, r.seconds);
    if (!r.feasible) continue;
    if (best == nullptr) {
      best = &r;
      continue;
    }
    const bool fixed = r.arithmetic == SspArithmetic::fixed128;
    const bool smaller = fixed ? r.gap_numerator < best->gap_numerator : r.gap_float < best->gap_float;
    const bool equal = fixed ? r.gap_numerator == best->gap_numerator : r.gap_float == best->gap_float;
    if (smaller || (equal && quarter_less(r.quarter, best->quarter))) best = &r;
  }
  SspResult out = best != nullptr ? *best : parts.front();
  out.nodes = nodes;
  out.seconds = seconds;
  out.suffix.clear();
  return out;
}

SspResult solve_ssp_parallel(const SspInstance& inst, SspArithmetic arithmetic, int suffix_bits,
                             int jobs) {
  if (arithmetic == SspArithmetic::fixed128 && inst.n / 2 > 64) {
    throw Error(ErrorKind::too_large, "exhaustive 128-bit search supports n/2 <= 64");
  }
  const std::vector<std::string> suffixes = parallel_split(inst, suffix_bits);
  const std::vector<long double> fw = float_weights_of(inst);
  std::vector<SspResult> results(suffixes.size());
  std::atomic<size_t> next{0};
  const auto t0 = std::chrono::steady_clock::now();
  auto worker = [&] {
    for (size_t i = next++; i < suffixes.size(); i = next++) {
      results[i] = solve_core(inst, arithmetic, suffixes[i], fw);
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(suffixes.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  SspResult out = merge_ssp_results(results);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  fill_gap(inst, out);
  return out;
}

Complex residual(const Code& code, unsigned precision_bits) {
  PrecisionScope scope(precision_bits);
  const int n = code.n();
  const Real step = pi() / n;
  Complex sum{Real(0), Real(0)};
  for (int j = 1; j <= n; ++j) {
    const Complex z = Complex::polar(step * j);
    sum = code.half()[static_cast<size_t>(j - 1)] > 0 ? sum + z : sum - z;
  }
  const Complex xi = Complex::polar(step);
  return (xi - Complex{Real(1), Real(0)}) * sum;
}

Complex residual_by_sides(const Code& code, unsigned precision_bits) {
  PrecisionScope scope(precision_bits);
  const int n = code.n();
  const Real step = pi() / n;
  Complex sum{Real(0), Real(0)};
  for (int j = 1; j <= n; ++j) {
    const Complex side = Complex::polar(step * (j + 1)) - Complex::polar(step * j);
    sum = code.half()[static_cast<size_t>(j - 1)] > 0 ? sum + side : sum - side;
  }
  return sum;
}

Real quarter_gap(const SspInstance& inst, const QuarterCode& quarter) {
  if (quarter.n() != inst.n) throw Error(ErrorKind::dimension_mismatch, "quarter code length");
  Real s = 0;
  for (size_t j = 0; j < inst.weights.size(); ++j) {
    s += quarter.entries()[j] > 0 ? inst.weights[j] : Real(-inst.weights[j]);
  }
  return s / 2;
}

namespace {

int max_run_of_word(std::uint64_t word, int len) {
  // longest run in the cyclic bit string of length len
  int best = 0;
  int run = 0;
  for (int i = 0; i < 2 * len; ++i) {
    const int b = static_cast<int>((word >> (i % len)) & 1u);
    const int prev = static_cast<int>((word >> ((i + len - 1) % len)) & 1u);
    run = (i > 0 && b == prev) ? run + 1 : 1;
    best = std::max(best, run);
  }
  return std::min(best, len);
}

}  // namespace

GeneralResidualResult minimize_residual_general(int n, unsigned precision_bits) {
  if (n < 3) throw Error(ErrorKind::invalid_n, "n must be at least 3");
  if (n > 20) throw Error(ErrorKind::too_large, "exhaustive residual search supports n <= 20");

  std::vector<double> cr(static_cast<size_t>(n)), ci(static_cast<size_t>(n));
  for (int j = 1; j <= n; ++j) {
    cr[static_cast<size_t>(j - 1)] = std::cos(M_PI * j / n);
    ci[static_cast<size_t>(j - 1)] = std::sin(M_PI * j / n);
  }
  // Double-precision scan; near-minimal candidates are re-ranked in MPFR.
  std::vector<std::pair<double, std::uint32_t>> scan;
  GeneralResidualResult out;
  double best = 1e300;
  for (std::uint32_t b = 0; b < (1u << (n - 1)); ++b) {
    const std::uint32_t bits = b << 1;  // c_1 = +1
    const std::uint64_t full = static_cast<std::uint64_t>(bits) |
                               (static_cast<std::uint64_t>(~bits & ((1u << n) - 1)) << n);
    if (max_run_of_word(full, 2 * n) > n - 2) continue;
    ++out.examined;
    double re = 0, im = 0;
    for (int j = 0; j < n; ++j) {
      const double s = ((bits >> j) & 1u) ? -1.0 : 1.0;
      re += s * cr[static_cast<size_t>(j)];
      im += s * ci[static_cast<size_t>(j)];
    }
    const double mod = std::hypot(re, im);
    best = std::min(best, mod);
    scan.emplace_back(mod, bits);
  }
  if (scan.empty()) throw Error(ErrorKind::invalid_n, "no admissible code");

  PrecisionScope scope(precision_bits);
  const Real step = pi() / n;
  bool have = false;
  for (const auto& [mod, bits] : scan) {
    if (mod > best + 1e-9) continue;
    std::vector<Sign> half(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) half[static_cast<size_t>(j)] = ((bits >> j) & 1u) ? -1 : 1;
    const Code c(std::move(half));
    Complex sum{Real(0), Real(0)};
    for (int j = 1; j <= n; ++j) {
      const Complex z = Complex::polar(step * j);
      sum = c.half()[static_cast<size_t>(j - 1)] > 0 ? sum + z : sum - z;
    }
    const Real m = sum.abs();
    const Code canon = canonical_form(c);
    if (!have || m < out.modulus || (m == out.modulus && canon < out.canonical)) {
      out.modulus = m;
      out.canonical = canon;
      have = true;
    }
  }

  // Rotating the full code by one position rotates r by -pi/n and reflections
  // conjugate it, so some orbit member has arg r in [0, pi/(2n)].
  const Real lo = -ldexp2(-static_cast<long>(precision_bits) / 2);
  const Real hi = step / 2 - lo;
  const std::vector<Sign> full = out.canonical.full();
  const int len = 2 * n;
  bool normalized = false;
  for (int k = 0; k < len && !normalized; ++k) {
    for (int refl = 0; refl < 2 && !normalized; ++refl) {
      std::vector<Sign> half(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) {
        const int idx = refl ? ((k - i) % len + len) % len : (i + k) % len;
        half[static_cast<size_t>(i)] = full[static_cast<size_t>(idx)];
      }
      const Code cand(std::move(half));
      const Real a = residual(cand, precision_bits).arg();
      if (out.modulus == 0 || (a >= lo && a <= hi)) {
        out.normalized = cand;
        normalized = true;
      }
    }
  }
  if (!normalized) out.normalized = out.canonical;
  return out;
}

std::optional<QuarterCode> published_quarter_code(int n) {
  static const std::map<int, std::string_view> table = {
      {4, "+-"},
      {8, "+--+"},
      {16, "+--+-++-"},
      {32, "+-++--+-+-+---++"},
      {64, "-++++++-----+--+-+++--+---+--+++"},
      {128, "-+++---+-++++-+++++----+-+---+-++----++++-+-----+--+-+-+--+--+--"},
  };
  const auto it = table.find(n);
  if (it == table.end()) return std::nullopt;
  return QuarterCode::parse(n, it->second);
}

}  // namespace maxperim
