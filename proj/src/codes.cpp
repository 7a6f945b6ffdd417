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

#include "maxperim/codes.hpp"

#include <algorithm>
#include <charconv>

#include "maxperim/error.hpp"

namespace maxperim {

namespace {

Sign sign_of(char ch) {
  if (ch == '+') return 1;
  if (ch == '-') return -1;
  throw Error(ErrorKind::parse_error, std::string("unexpected character '") + ch + "' in code");
}

char char_of(Sign s) { return s > 0 ? '+' : '-'; }

std::vector<Sign> parse_signs(std::string_view text) {
  std::vector<Sign> out;
  out.reserve(text.size());
  for (char ch : text) {
    if (ch == ' ') continue;
    out.push_back(sign_of(ch));
  }
  return out;
}

// Full code as 0/1 symbols ('+' = 0) so that lexicographic comparison of the
// symbol vectors matches the '+' < '-' ordering.
std::vector<std::uint8_t> full_symbols(const Code& code) {
  const int len = 2 * code.n();
  std::vector<std::uint8_t> a(static_cast<size_t>(len));
  for (int i = 0; i < len; ++i) a[static_cast<size_t>(i)] = code.full_at(i) > 0 ? 0 : 1;
  return a;
}

std::vector<std::uint8_t> min_dihedral_image(const std::vector<std::uint8_t>& a) {
  const size_t len = a.size();
  std::vector<std::uint8_t> best = a;
  std::vector<std::uint8_t> cand(len);
  for (size_t k = 0; k < len; ++k) {
    for (size_t i = 0; i < len; ++i) cand[i] = a[(i + k) % len];
    if (cand < best) best = cand;
    for (size_t i = 0; i < len; ++i) cand[i] = a[(k + len - i) % len];
    if (cand < best) best = cand;
  }
  return best;
}

}  // namespace

Code::Code(std::vector<Sign> half) : half_(std::move(half)) {
  if (half_.empty()) throw Error(ErrorKind::invalid_code, "empty code");
  for (Sign s : half_) {
    if (s != 1 && s != -1) throw Error(ErrorKind::invalid_code, "signs must be +1 or -1");
  }
}

Code Code::parse(std::string_view text) { return Code(parse_signs(text)); }

Code Code::parse_full(std::string_view text) {
  std::vector<Sign> full = parse_signs(text);
  if (full.size() % 2 != 0 || full.empty()) {
    throw Error(ErrorKind::invalid_code, "full code must have even length");
  }
  const size_t n = full.size() / 2;
  for (size_t j = 0; j < n; ++j) {
    if (full[n + j] != -full[j]) {
      throw Error(ErrorKind::invalid_code, "full code is not antisymmetric");
    }
  }
  full.resize(n);
  return Code(std::move(full));
}

Sign Code::full_at(long j) const {
  const long len = 2L * n();
  long k = j % len;
  if (k < 0) k += len;
  return k < n() ? half_[static_cast<size_t>(k)] : static_cast<Sign>(-half_[static_cast<size_t>(k - n())]);
}

std::vector<Sign> Code::full() const {
  std::vector<Sign> out(half_);
  for (Sign s : half_) out.push_back(static_cast<Sign>(-s));
  return out;
}

std::string Code::to_string() const {
  std::string s;
  for (Sign c : half_) s += char_of(c);
  return s;
}

std::string Code::full_string() const {
  std::string s;
  for (Sign c : full()) s += char_of(c);
  return s;
}

int Code::max_cyclic_run() const {
  const std::vector<Sign> f = full();
  const int len = static_cast<int>(f.size());
  // An antisymmetric code always contains both signs, so a run boundary exists.
  int start = 0;
  while (f[static_cast<size_t>(start)] == f[static_cast<size_t>((start + len - 1) % len)]) ++start;
  int best = 0;
  int run = 0;
  for (int i = 0; i < len; ++i) {
    const int k = (start + i) % len;
    if (i > 0 && f[static_cast<size_t>(k)] == f[static_cast<size_t>((k + len - 1) % len)]) {
      ++run;
    } else {
      run = 1;
    }
    best = std::max(best, run);
  }
  return best;
}

Code Code::negated() const {
  std::vector<Sign> h(half_);
  for (Sign& s : h) s = static_cast<Sign>(-s);
  return Code(std::move(h));
}

std::strong_ordering operator<=>(const Code& a, const Code& b) {
  if (a.n() != b.n()) return a.n() <=> b.n();
  // '+' sorts before '-'
  for (int j = 0; j < a.n(); ++j) {
    const Sign x = a.half()[static_cast<size_t>(j)];
    const Sign y = b.half()[static_cast<size_t>(j)];
    if (x != y) return x > y ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

QuarterCode::QuarterCode(int n, std::vector<Sign> entries) : n_(n), entries_(std::move(entries)) {
  if (n <= 0 || n % 4 != 0) throw Error(ErrorKind::invalid_n, "quarter codes need n divisible by 4");
  if (static_cast<int>(entries_.size()) != n / 2) {
    throw Error(ErrorKind::invalid_code, "quarter code must have n/2 entries");
  }
  for (Sign s : entries_) {
    if (s != 1 && s != -1) throw Error(ErrorKind::invalid_code, "signs must be +1 or -1");
  }
}

QuarterCode QuarterCode::parse(int n, std::string_view text) { return QuarterCode(n, parse_signs(text)); }

std::string QuarterCode::to_string() const {
  std::string s;
  for (Sign c : entries_) s += char_of(c);
  return s;
}

QuarterCode QuarterCode::negated() const {
  std::vector<Sign> e(entries_);
  for (Sign& s : e) s = static_cast<Sign>(-s);
  return QuarterCode(n_, std::move(e));
}

int Composition::total() const {
  int t = 0;
  for (int p : parts) t += p;
  return t;
}

std::string Composition::to_string() const {
  std::string s;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(parts[i]);
  }
  return s;
}

Composition Composition::parse(std::string_view text) {
  Composition c;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t next = text.find(',', pos);
    if (next == std::string_view::npos) next = text.size();
    std::string_view tok = text.substr(pos, next - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    int v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw Error(ErrorKind::parse_error, "bad composition part '" + std::string(tok) + "'");
    }
    c.parts.push_back(v);
    pos = next + 1;
  }
  return c;
}

Code canonical_form(const Code& code) {
  const std::vector<std::uint8_t> best = min_dihedral_image(full_symbols(code));
  std::vector<Sign> half(static_cast<size_t>(code.n()));
  for (int j = 0; j < code.n(); ++j) half[static_cast<size_t>(j)] = best[static_cast<size_t>(j)] ? -1 : 1;
  return Code(std::move(half));
}

Code canonicalize(const Code& code) {
  if (!code.admissible()) {
    throw Error(ErrorKind::invalid_code,
                "code " + code.to_string() + " has a run longer than n-2");
  }
  return canonical_form(code);
}

bool equivalent(const Code& a, const Code& b) {
  return a.n() == b.n() && canonical_form(a) == canonical_form(b);
}

Composition canonical_composition(const Composition& comp) {
  const size_t k = comp.parts.size();
  std::vector<int> best = comp.parts;
  std::vector<int> cand(k);
  for (size_t r = 0; r < k; ++r) {
    for (size_t i = 0; i < k; ++i) cand[i] = comp.parts[(i + r) % k];
    if (cand < best) best = cand;
    for (size_t i = 0; i < k; ++i) cand[i] = comp.parts[(r + k - i) % k];
    if (cand < best) best = cand;
  }
  return Composition{best};
}

Composition code_to_composition(const Code& code) {
  const std::vector<Sign> f = code.full();
  const int len = static_cast<int>(f.size());
  int start = 0;
  while (!(f[static_cast<size_t>(start)] < 0 && f[static_cast<size_t>((start + len - 1) % len)] > 0)) ++start;
  Composition comp;
  int run = 0;
  for (int i = 0; i < len; ++i) {
    const Sign s = f[static_cast<size_t>((start + i) % len)];
    if (s < 0) {
      ++run;
    } else if (run > 0) {
      comp.parts.push_back(run);
      run = 0;
    }
  }
  if (run > 0) comp.parts.push_back(run);
  return canonical_composition(comp);
}

Code composition_to_code(const Composition& comp, int n) {
  const int k = static_cast<int>(comp.parts.size());
  if (k < 3 || k % 2 == 0) {
    throw Error(ErrorKind::invalid_composition, "composition length must be odd and at least 3");
  }
  for (int p : comp.parts) {
    if (p <= 0) throw Error(ErrorKind::invalid_composition, "parts must be positive");
  }
  if (comp.total() != n) {
    throw Error(ErrorKind::invalid_composition,
                "parts sum to " + std::to_string(comp.total()) + ", expected " + std::to_string(n));
  }
  const int h = (k - 1) / 2;
  std::vector<Sign> full;
  full.reserve(static_cast<size_t>(2 * n));
  for (int i = 0; i < k; ++i) {
    full.insert(full.end(), static_cast<size_t>(comp.parts[static_cast<size_t>((i + h) % k)]), Sign{1});
    full.insert(full.end(), static_cast<size_t>(comp.parts[static_cast<size_t>(i)]), Sign{-1});
  }
  full.resize(static_cast<size_t>(n));
  return Code(std::move(full));
}

Code odd_divisor_code(int n, int d) {
  if (n <= 0 || d < 3 || d % 2 == 0 || n % d != 0) {
    throw Error(ErrorKind::invalid_divisor,
                std::to_string(d) + " is not an odd divisor >= 3 of " + std::to_string(n));
  }
  std::vector<Sign> half(static_cast<size_t>(n));
  for (int j = 1; j <= n; ++j) {
    const long e = (static_cast<long>(j) * d + n - 1) / n;
    half[static_cast<size_t>(j - 1)] = (e % 2 == 0) ? 1 : -1;
  }
  return Code(std::move(half));
}

Code expand_quarter(const QuarterCode& quarter) {
  const int n = quarter.n();
  std::vector<Sign> half(static_cast<size_t>(n));
  for (int j = 0; j < n / 2; ++j) {
    const Sign s = quarter.entries()[static_cast<size_t>(j)];
    half[static_cast<size_t>(j)] = s;
    half[static_cast<size_t>(n - 1 - j)] = static_cast<Sign>(-s);
  }
  return Code(std::move(half));
}

bool has_axial_symmetry(const Code& code) {
  const int n = code.n();
  for (int j = 0; j < n; ++j) {
    if (code.half()[static_cast<size_t>(n - 1 - j)] != -code.half()[static_cast<size_t>(j)]) return false;
  }
  return true;
}

}  // namespace maxperim
