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


#include "maxperim/pipeline.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "maxperim/error.hpp"

namespace maxperim {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

PolygonSolution solve_code(const Code& code, const NewtonOptions& options, NewtonResult* newton) {
  NewtonResult r = newton_solve(code, options);
  if (!r.report.monotone) {
    throw Error(ErrorKind::degenerate_angles, "converged angles of " + code.to_string() + " are not monotone");
  }
  PolygonSolution poly = reconstruct(code, r.state.angles, options.tol_bits);
  zonogon_check(poly);
  if (newton != nullptr) *newton = std::move(r);
  return poly;
}

TwoPhaseResult solve_two_phase(int n, const TwoPhaseOptions& options) {
  if (!is_power_of_two(n) || n < 4 || n > 128) {
    throw Error(ErrorKind::invalid_n, "two-phase solve needs n = 2^s with 4 <= n <= 128");
  }
  PrecisionScope scope(options.precision_bits);
  TwoPhaseResult out;
  if (options.quarter) {
    if (options.quarter->n() != n) throw Error(ErrorKind::dimension_mismatch, "quarter code does not match n");
    out.quarter = *options.quarter;
  } else if (n > 64) {
    out.quarter = *published_quarter_code(n);
  } else {
    const SspInstance inst = build_ssp(n, std::max(256u, options.precision_bits));
    out.ssp = options.suffix_bits > 0 || options.jobs > 1
                  ? solve_ssp_parallel(inst, SspArithmetic::fixed128, options.suffix_bits, options.jobs)
                  : solve_ssp(inst, SspArithmetic::fixed128);
    out.quarter = out.ssp->quarter;
  }
  out.code = expand_quarter(out.quarter);
  NewtonOptions no;
  no.precision_bits = options.precision_bits;
  no.tol_bits = options.tol_bits;
  no.variant = options.variant.value_or(default_variant(n));
  no.max_iter = options.max_iter;
  out.polygon = solve_code(out.code, no, &out.newton);
  return out;
}

std::optional<std::string> default_checkpoint_path(int n) {
  const char* dir = std::getenv("MAXPERIM_CHECKPOINT_DIR");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  std::string path(dir);
  if (path.back() != '/') path += '/';
  return path + "enumerate-n" + std::to_string(n) + ".jsonl";
}

namespace {

struct CheckpointRecord {
  std::string perimeter;
  std::string status;
};

// Lines that do not parse (a torn final write) are ignored.
std::map<std::string, CheckpointRecord> load_checkpoint(const std::string& path) {
  std::map<std::string, CheckpointRecord> out;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    const nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("canonical_code") || !j.contains("status")) continue;
    out[j["canonical_code"].get<std::string>()] = {j.value("perimeter_decimal", std::string()),
                                                   j["status"].get<std::string>()};
  }
  return out;
}

class CheckpointWriter {
 public:
  explicit CheckpointWriter(const std::optional<std::string>& path) {
    if (!path) return;
    fd_ = ::open(path->c_str(), O_WRONLY | O_APPEND | O_CREAT, 0644);
    if (fd_ < 0) throw Error(ErrorKind::parse_error, "cannot open checkpoint file " + *path);
  }
  ~CheckpointWriter() {
    if (fd_ >= 0) ::close(fd_);
  }
  CheckpointWriter(const CheckpointWriter&) = delete;
  CheckpointWriter& operator=(const CheckpointWriter&) = delete;

  // One write per record so a crash never leaves an interleaved line.
  void append(const RankedEntry& e, int digits) {
    if (fd_ < 0) return;
    nlohmann::json j;
    j["canonical_code"] = e.canonical.to_string();
    j["perimeter_decimal"] = e.status == "ok" || e.status == "not-monotone" ? to_decimal(e.perimeter, digits) : "";
    j["status"] = e.status;
    const std::string line = j.dump() + "\n";
    std::lock_guard<std::mutex> lock(mu_);
    ssize_t written = ::write(fd_, line.data(), line.size());
    (void)written;
  }

 private:
  int fd_ = -1;
  std::mutex mu_;
};

RankedEntry solve_entry(const Code& code, const EnumerateOptions& options) {
  RankedEntry e;
  e.canonical = code;
  NewtonOptions no;
  no.precision_bits = options.precision_bits;
  no.tol_bits = options.tol_bits;
  no.variant = options.variant;
  no.max_iter = options.max_iter;
  std::optional<NewtonResult> nr;
  try {
    nr = newton_solve(code, no);
  } catch (const Error& first) {
    e.retried = true;
    no.variant = NewtonVariant::double_factor;
    try {
      nr = newton_solve(code, no);
    } catch (const Error& second) {
      e.status = std::string(to_string(second.kind()));
      e.variant = no.variant;
      return e;
    }
  }
  e.variant = no.variant;
  e.iterations = nr->report.iterations;
  e.perimeter = nr->report.perimeter;
  if (!nr->report.monotone) {
    e.status = "not-monotone";
    return e;
  }
  try {
    PolygonSolution poly = reconstruct(code, nr->state.angles, options.tol_bits);
    zonogon_check(poly);
    e.polygon = std::move(poly);
    e.status = "ok";
  } catch (const Error& err) {
    e.status = std::string(to_string(err.kind()));
  }
  return e;
}

bool has_perimeter(const RankedEntry& e) { return e.status == "ok" || e.status == "not-monotone"; }

}  // namespace

RankedSolutions enumerate_and_solve(int n, const EnumerateOptions& options) {
  const int cap = options.allow_large ? kMaxEnumerationN : kDefaultEnumerationCap;
  if (n > cap) {
    throw Error(ErrorKind::too_large, "enumeration above n = " + std::to_string(cap) +
                                          (options.allow_large ? "" : " needs the allow-large flag"));
  }
  if (n < 3) throw Error(ErrorKind::invalid_n, "n must be at least 3");
  // all workers share this precision; their own scopes then never write it
  PrecisionScope scope(options.precision_bits);
  const int digits = decimal_digits_for_bits(scope.bits());

  std::map<std::string, CheckpointRecord> done;
  if (options.checkpoint_path) done = load_checkpoint(*options.checkpoint_path);
  CheckpointWriter writer(options.checkpoint_path);

  const int prefix_bits = std::min(n - 1, 6);
  const int partitions = 1 << prefix_bits;
  std::atomic<int> next{0};
  std::mutex mu;
  std::vector<RankedEntry> all;
  std::exception_ptr failure;

  auto worker = [&] {
    std::vector<RankedEntry> local;
    try {
      for (int part = next++; part < partitions; part = next++) {
        EnumerationOptions eo;
        eo.partition = {prefix_bits, static_cast<std::uint64_t>(part)};
        enumerate_codes(
            n,
            [&](const Code& code) {
              const auto it = done.find(code.to_string());
              if (it != done.end()) {
                RankedEntry e;
                e.canonical = code;
                e.status = it->second.status;
                e.from_checkpoint = true;
                if (has_perimeter(e)) e.perimeter = parse_real(it->second.perimeter);
                local.push_back(std::move(e));
                return;
              }
              RankedEntry e = solve_entry(code, options);
              writer.append(e, digits);
              local.push_back(std::move(e));
            },
            eo);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      failure = std::current_exception();
    }
    std::lock_guard<std::mutex> lock(mu);
    for (RankedEntry& e : local) all.push_back(std::move(e));
  };
  const int threads = std::max(1, options.jobs);
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  std::sort(all.begin(), all.end(), [](const RankedEntry& a, const RankedEntry& b) {
    const int ra = a.status == "ok" ? 0 : has_perimeter(a) ? 1 : 2;
    const int rb = b.status == "ok" ? 0 : has_perimeter(b) ? 1 : 2;
    if (ra != rb) return ra < rb;
    if (ra < 2 && a.perimeter != b.perimeter) return a.perimeter > b.perimeter;
    return a.canonical < b.canonical;
  });
  RankedSolutions out;
  out.n = n;
  out.entries = std::move(all);
  return out;
}

}  // namespace maxperim
