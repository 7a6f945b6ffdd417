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


#include "maxperim/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "maxperim/error.hpp"
#include "maxperim/pipeline.hpp"
#include "maxperim/record.hpp"

namespace maxperim {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool usage_kind(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_code:
    case ErrorKind::invalid_composition:
    case ErrorKind::invalid_divisor:
    case ErrorKind::invalid_n:
    case ErrorKind::too_large:
    case ErrorKind::dimension_mismatch:
    case ErrorKind::parse_error:
      return true;
    default:
      return false;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::parse_error, "cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

/// A half code given inline or as the path of a file holding it.
Code code_argument(const std::string& arg) {
  std::string text = arg;
  if (arg.find_first_not_of("+- ") != std::string::npos && std::filesystem::is_regular_file(arg)) {
    text = trim(read_file(arg));
  }
  return Code::parse(text);
}

struct Precision {
  unsigned prec_bits = 360;
  unsigned tol_bits = 320;
};

void add_precision(CLI::App* sub, Precision& p) {
  sub->add_option("--prec-bits", p.prec_bits, "Working precision in bits")->capture_default_str();
  sub->add_option("--tol-bits", p.tol_bits, "Newton tolerance in bits")->capture_default_str();
}

void check_precision(const Precision& p) {
  if (p.prec_bits < p.tol_bits + 33) {
    throw Error(ErrorKind::parse_error, "--prec-bits must exceed --tol-bits by more than 32");
  }
}

// --- subcommands ---------------------------------------------------------

struct CodesArgs {
  int n = 0;
  bool count_only = false;
  bool allow_large = false;
};

int cmd_codes(const CodesArgs& a, std::ostream& out) {
  if (a.n > kDefaultEnumerationCap && !a.allow_large) {
    throw Error(ErrorKind::too_large, "n above " + std::to_string(kDefaultEnumerationCap) + " needs --allow-large");
  }
  if (a.count_only) {
    out << count_codes(a.n) << "\n";
    return kExitOk;
  }
  enumerate_codes(a.n, [&](const Code& c) { out << c.to_string() << " " << code_to_composition(c).to_string() << "\n"; });
  return kExitOk;
}

struct Phase1Args {
  int n = 0;
  std::string mode = "int128";
  std::string suffix;
  int jobs = 1;
  int suffix_bits = -1;
};

int cmd_phase1(const Phase1Args& a, std::ostream& out) {
  const SspInstance inst = build_ssp(a.n);
  const SspArithmetic arith = parse_arithmetic(a.mode);
  SspResult r;
  if (!a.suffix.empty()) {
    r = solve_ssp(inst, arith, a.suffix);
  } else {
    int bits = a.suffix_bits;
    if (bits < 0) {
      bits = 0;
      while ((1 << bits) < 4 * a.jobs && bits < 8 && bits + 1 < a.n / 2) ++bits;
      if (a.jobs == 1) bits = 0;
    }
    r = bits == 0 ? solve_ssp(inst, arith) : solve_ssp_parallel(inst, arith, bits, a.jobs);
  }
  if (!r.feasible) throw Error(ErrorKind::no_convergence, "no feasible quarter code for the given suffix");
  json j;
  j["n"] = r.n;
  j["quarter_code"] = r.quarter.to_string();
  j["gap_decimal"] = to_decimal(r.gap, 4);
  j["gap_numerator"] = arith == SspArithmetic::fixed128 ? json(int128_to_string(r.gap_numerator)) : json(nullptr);
  j["nodes"] = r.nodes;
  j["arithmetic"] = std::string(to_string(arith));
  j["metadata"] = json{{"seconds", r.seconds}};
  out << j.dump() << "\n";
  return kExitOk;
}

struct SolveArgs {
  Precision p;
  std::string variant;
  int max_iter = 64;
};

NewtonVariant variant_or_default(const std::string& text, int n) {
  return text.empty() ? default_variant(n) : parse_variant(text);
}

int cmd_phase2(const std::string& code_arg, const SolveArgs& a, std::ostream& out) {
  check_precision(a.p);
  PrecisionScope scope(a.p.prec_bits);
  const Code code = code_argument(code_arg);
  NewtonOptions o;
  o.precision_bits = a.p.prec_bits;
  o.tol_bits = a.p.tol_bits;
  o.variant = variant_or_default(a.variant, code.n());
  o.max_iter = a.max_iter;
  const auto start = Clock::now();
  NewtonResult newton;
  const PolygonSolution poly = solve_code(code, o, &newton);
  Timings t;
  t.phase2_seconds = seconds_since(start);
  t.total_seconds = t.phase2_seconds;
  out << to_json(make_record(poly, newton, std::nullopt, t));
  return kExitOk;
}

int cmd_solve(int n, const std::string& quarter, int jobs, int suffix_bits, const SolveArgs& a, std::ostream& out) {
  check_precision(a.p);
  PrecisionScope scope(a.p.prec_bits);
  TwoPhaseOptions o;
  o.precision_bits = a.p.prec_bits;
  o.tol_bits = a.p.tol_bits;
  if (!a.variant.empty()) o.variant = parse_variant(a.variant);
  o.max_iter = a.max_iter;
  if (!quarter.empty()) o.quarter = QuarterCode::parse(n, quarter);
  o.jobs = jobs;
  o.suffix_bits = suffix_bits;
  const auto start = Clock::now();
  const TwoPhaseResult r = solve_two_phase(n, o);
  Timings t;
  t.total_seconds = seconds_since(start);
  if (r.ssp) {
    t.phase1_seconds = r.ssp->seconds;
    t.phase2_seconds = *t.total_seconds - r.ssp->seconds;
  }
  out << to_json(make_record(r.polygon, r.newton, r.quarter, t));
  return kExitOk;
}

struct EnumerateArgs {
  int n = 0;
  Precision p;
  int max_iter = 64;
  int jobs = 1;
  bool allow_large = false;
  std::string checkpoint;
};

int cmd_enumerate(const EnumerateArgs& a, std::ostream& out) {
  check_precision(a.p);
  PrecisionScope scope(a.p.prec_bits);
  EnumerateOptions o;
  o.precision_bits = a.p.prec_bits;
  o.tol_bits = a.p.tol_bits;
  o.max_iter = a.max_iter;
  o.jobs = a.jobs;
  o.allow_large = a.allow_large;
  o.checkpoint_path = a.checkpoint.empty() ? default_checkpoint_path(a.n) : std::optional<std::string>(a.checkpoint);
  const RankedSolutions r = enumerate_and_solve(a.n, o);
  const int digits = decimal_digits_for_bits(a.p.prec_bits);
  bool all_ok = true;
  int rank = 0;
  for (const RankedEntry& e : r.entries) {
    json j;
    j["rank"] = ++rank;
    j["code"] = e.canonical.to_string();
    j["composition"] = code_to_composition(e.canonical).to_string();
    j["status"] = e.status;
    const bool has_value = e.status == "ok" || e.status == "not-monotone";
    j["perimeter"] = has_value ? json(to_decimal(e.perimeter, digits)) : json(nullptr);
    out << j.dump() << "\n";
    all_ok = all_ok && e.status == "ok";
  }
  return all_ok ? kExitOk : kExitFailure;
}

struct VerifyArgs {
  std::string poly;
  std::string closed_form;
  std::string value;
  std::string value_from;
  std::string quantity = "perimeter";
  bool equilateral = false;
  Precision p;
};

Real verify_value(const VerifyArgs& a) {
  const int sources = !a.value.empty() + !a.value_from.empty() + a.equilateral;
  if (sources != 1) {
    throw Error(ErrorKind::parse_error, "give exactly one of --value, --value-from, --equilateral-octagon");
  }
  if (a.equilateral) return equilateral_octagon_side(a.p.prec_bits);
  if (!a.value.empty()) return parse_real(a.value);
  const std::string text = trim(read_file(a.value_from));
  if (!text.empty() && text.front() == '{') {
    const SolutionRecord rec = parse_record(text);
    const Real perim = parse_real(rec.perimeter);
    if (a.quantity == "perimeter") return perim;
    if (a.quantity == "side") return perim / rec.n;
    throw Error(ErrorKind::parse_error, "--quantity must be perimeter or side");
  }
  return parse_real(text);
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  if (a.poly.empty() == a.closed_form.empty()) throw Error(ErrorKind::parse_error, "give exactly one of --poly, --closed-form");
  PrecisionScope scope(a.p.prec_bits);
  const Real value = verify_value(a);
  out << "value " << to_decimal(value, 40) << "\n";
  if (!a.closed_form.empty()) {
    const ClosedFormReport r = closed_form_check(a.closed_form, value, a.p.tol_bits);
    out << "closed form " << to_decimal(r.closed_value, 40) << "\n";
    out << "difference " << to_decimal(r.difference, 4) << "\n";
    out << (r.match ? "closed form confirmed" : "closed form not confirmed") << "\n";
    return r.match ? kExitOk : kExitFailure;
  }
  const IntegerPolynomial& poly = polynomial_by_name(a.poly);
  const DualRootReport d = dual_root_check(poly, value, a.p.tol_bits);
  auto line = [&](const char* label, const RootReport& r) {
    out << poly.name << " at " << label << ": backward error " << to_decimal(r.backward_error, 4) << ", "
        << (r.confirmed ? "root confirmed" : "not a root") << "\n";
  };
  line("value", d.at_value);
  line("value^2", d.at_square);
  out << "annihilated by " << d.annihilated_by << "\n";
  return d.annihilated_by == "neither" ? kExitFailure : kExitOk;
}

int cmd_export(const std::string& in, const std::string& format, const std::string& out_path, std::ostream& out) {
  const SolutionRecord rec = parse_record(read_file(in));
  const std::string bytes = export_record(rec, parse_export_format(format));
  if (out_path.empty()) {
    out << bytes;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw Error(ErrorKind::parse_error, "cannot write '" + out_path + "'");
    f << bytes;
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Maximal-perimeter small polygons", "maxperim"};
  app.require_subcommand(1);

  CodesArgs codes;
  CLI::App* codes_cmd = app.add_subcommand("codes", "Enumerate canonical codes of small n-gons");
  codes_cmd->add_option("--n", codes.n, "Number of vertices")->required();
  codes_cmd->add_flag("--count-only", codes.count_only, "Print only the number of classes");
  codes_cmd->add_flag("--allow-large", codes.allow_large, "Permit n above the default cap");

  Phase1Args p1;
  CLI::App* p1_cmd = app.add_subcommand("phase1", "Subset-sum search for the best symmetric code");
  p1_cmd->add_option("--n", p1.n, "Number of vertices, a power of two")->required();
  p1_cmd->add_option("--mode", p1.mode, "int128 or float")->capture_default_str();
  p1_cmd->add_option("--suffix", p1.suffix, "Fixed trailing entries, '0'/'1' or '+'/'-'");
  p1_cmd->add_option("--jobs", p1.jobs, "Worker threads")->check(CLI::PositiveNumber);
  p1_cmd->add_option("--suffix-bits", p1.suffix_bits, "Suffix split width for --jobs");

  SolveArgs p2;
  std::string code_arg;
  CLI::App* p2_cmd = app.add_subcommand("phase2", "Newton solve for a given code");
  p2_cmd->add_option("--code", code_arg, "Sign string or file holding it")->required();
  add_precision(p2_cmd, p2.p);
  p2_cmd->add_option("--variant", p2.variant, "Linear solver variant");
  p2_cmd->add_option("--max-iter", p2.max_iter, "Newton iteration limit")->capture_default_str();

  SolveArgs sv;
  int solve_n = 0, solve_jobs = 1, solve_bits = 0;
  std::string solve_quarter;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Two-phase solve for n a power of two");
  solve_cmd->add_option("--n", solve_n, "Number of vertices")->required();
  solve_cmd->add_option("--quarter", solve_quarter, "Quarter code, skipping the subset-sum search");
  add_precision(solve_cmd, sv.p);
  solve_cmd->add_option("--variant", sv.variant, "Linear solver variant");
  solve_cmd->add_option("--max-iter", sv.max_iter, "Newton iteration limit")->capture_default_str();
  solve_cmd->add_option("--jobs", solve_jobs, "Worker threads")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--suffix-bits", solve_bits, "Suffix split width for --jobs");

  EnumerateArgs en;
  CLI::App* en_cmd = app.add_subcommand("enumerate-solve", "Solve and rank every code for n");
  en_cmd->add_option("--n", en.n, "Number of vertices")->required();
  add_precision(en_cmd, en.p);
  en_cmd->add_option("--max-iter", en.max_iter, "Newton iteration limit")->capture_default_str();
  en_cmd->add_option("--jobs", en.jobs, "Worker threads")->check(CLI::PositiveNumber);
  en_cmd->add_flag("--allow-large", en.allow_large, "Permit n above the default cap");
  en_cmd->add_option("--checkpoint", en.checkpoint, "JSON-lines checkpoint file");

  VerifyArgs vf;
  CLI::App* vf_cmd = app.add_subcommand("verify", "Check a value against a polynomial or closed form");
  vf_cmd->add_option("--poly", vf.poly, "q8, P8 or E8");
  vf_cmd->add_option("--closed-form", vf.closed_form, "Sum like \"2 + 4 sin(pi/12)\"");
  vf_cmd->add_option("--value", vf.value, "Decimal value");
  vf_cmd->add_option("--value-from", vf.value_from, "Solution record or file holding a decimal");
  vf_cmd->add_option("--quantity", vf.quantity, "perimeter or side, for records")->capture_default_str();
  vf_cmd->add_flag("--equilateral-octagon", vf.equilateral, "Use the side of the best equilateral octagon");
  add_precision(vf_cmd, vf.p);

  std::string ex_in, ex_format = "json", ex_out;
  CLI::App* ex_cmd = app.add_subcommand("export", "Convert a solution record");
  ex_cmd->add_option("--in", ex_in, "Solution record")->required();
  ex_cmd->add_option("--format", ex_format, "json, csv, svg or tikz")->capture_default_str();
  ex_cmd->add_option("--out", ex_out, "Output file, standard output by default");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (codes_cmd->parsed()) return cmd_codes(codes, out);
    if (p1_cmd->parsed()) return cmd_phase1(p1, out);
    if (p2_cmd->parsed()) return cmd_phase2(code_arg, p2, out);
    if (solve_cmd->parsed()) return cmd_solve(solve_n, solve_quarter, solve_jobs, solve_bits, sv, out);
    if (en_cmd->parsed()) return cmd_enumerate(en, out);
    if (vf_cmd->parsed()) return cmd_verify(vf, out);
    if (ex_cmd->parsed()) return cmd_export(ex_in, ex_format, ex_out, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return usage_kind(e.kind()) ? kExitUsage : kExitFailure;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace maxperim
