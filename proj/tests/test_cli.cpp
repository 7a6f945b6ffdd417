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


#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "maxperim/cli.hpp"
#include "maxperim/error.hpp"
#include "maxperim/pipeline.hpp"
#include "maxperim/record.hpp"

using namespace maxperim;
namespace bmp = boost::multiprecision;

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "maxperim");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const SolutionRecord& octagon_record() {
  static const SolutionRecord rec = [] {
    PrecisionScope scope(360);
    const TwoPhaseResult r = solve_two_phase(8);
    return make_record(r.polygon, r.newton, r.quarter, Timings{0.5, 0.25, 0.75});
  }();
  return rec;
}

std::string write_temp(const char* name, const std::string& content) {
  const std::string path = (std::filesystem::temp_directory_path() / name).string();
  std::ofstream(path, std::ios::binary) << content;
  return path;
}

size_t count(const std::string& text, const std::string& needle) {
  size_t c = 0;
  for (size_t p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++c;
  return c;
}

}  // namespace

TEST_CASE("record decimals carry the full precision") {
  const SolutionRecord& rec = octagon_record();
  CHECK(rec.angles.size() == 9);
  CHECK(rec.multipliers.size() == 2);
  CHECK(rec.vertices.size() == 8);
  CHECK(rec.quarter_code == std::optional<std::string>("-++-"));
  PrecisionScope scope(360);
  const TwoPhaseResult r = solve_two_phase(8);
  CHECK(parse_real(rec.perimeter) == r.polygon.perimeter);
  for (size_t j = 0; j < rec.angles.size(); ++j) CHECK(parse_real(rec.angles[j]) == r.polygon.angles.phi[j]);
}

TEST_CASE("record JSON round trip is byte identical") {
  const SolutionRecord& rec = octagon_record();
  const std::string full = to_json(rec);
  const SolutionRecord back = parse_record(full);
  CHECK(back == rec);
  CHECK(to_json(back) == full);
  const std::string canon = export_record(rec, ExportFormat::json);
  CHECK(canon.find("metadata") == std::string::npos);
  CHECK(export_record(parse_record(canon), ExportFormat::json) == canon);
  SolutionRecord other_timing = rec;
  other_timing.timings.total_seconds = 99.0;
  CHECK(to_json(other_timing, false) == canon);
}

TEST_CASE("record parsing rejects malformed input") {
  CHECK_THROWS_AS(parse_record("{"), Error);
  CHECK_THROWS_AS(parse_record("{\"schema_version\": 1}"), Error);
  std::string text = to_json(octagon_record());
  text.replace(text.find("\"schema_version\": 1"), 19, "\"schema_version\": 2");
  CHECK_THROWS_AS(parse_record(text), Error);
}

TEST_CASE("record verification") {
  const SolutionRecord& rec = octagon_record();
  const PolygonSolution poly = verify_record(rec);
  CHECK(poly.n == 8);

  SolutionRecord empty = rec;
  empty.angles.clear();
  try {
    export_record(empty, ExportFormat::svg);
    FAIL("svg export of an empty record");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::unverified_record);
  }
  CHECK_THROWS_AS(export_record(empty, ExportFormat::tikz), Error);

  SolutionRecord tampered = rec;
  tampered.perimeter = "3.2";
  CHECK_THROWS_AS(verify_record(tampered), Error);
  SolutionRecord wrong_code = rec;
  wrong_code.code = "++++-+-+";
  CHECK_THROWS_AS(verify_record(wrong_code), Error);
}

TEST_CASE("svg, tikz and csv exports") {
  const SolutionRecord& rec = octagon_record();
  const std::string svg = export_record(rec, ExportFormat::svg);
  CHECK(count(svg, "class=\"side\"") == 8);
  CHECK(count(svg, "class=\"diameter\"") == 8);
  CHECK(svg.find("stroke=\"gray\"") != std::string::npos);
  const std::string tikz = export_record(rec, ExportFormat::tikz);
  CHECK(count(tikz, "\\draw[gray]") == 8);
  CHECK(count(tikz, "cycle") == 1);
  const std::string csv = export_record(rec, ExportFormat::csv);
  CHECK(count(csv, "\n") == 9);
  CHECK(csv.find(rec.vertices[3].first) != std::string::npos);
  CHECK(parse_export_format("tikz") == ExportFormat::tikz);
  CHECK_THROWS_AS(parse_export_format("png"), Error);
}

TEST_CASE("cli codes") {
  const Invocation count16 = invoke({"codes", "--n", "16", "--count-only"});
  CHECK(count16.code == 0);
  CHECK(count16.out == "1087\n");
  const Invocation list8 = invoke({"codes", "--n", "8"});
  CHECK(count(list8.out, "\n") == 11);
  CHECK(list8.out.find("++-+--++ 1,2,1,2,2") != std::string::npos);
  CHECK(invoke({"codes", "--n", "20", "--count-only"}).code == 2);
}

TEST_CASE("cli usage errors") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  const Invocation missing = invoke({"solve"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("Usage") != std::string::npos);
  CHECK(invoke({"solve", "--n", "12"}).code == 2);
  CHECK(invoke({"phase2", "--code", "+++-"}).code == 2);
  CHECK(invoke({"phase2", "--code", "+--+-++-", "--prec-bits", "100", "--tol-bits", "90"}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("cli computational failure") {
  const Invocation r = invoke({"phase2", "--code", "+--+-++-", "--max-iter", "2"});
  CHECK(r.code == 1);
  CHECK(r.err.find("no-convergence") != std::string::npos);
}

TEST_CASE("cli phase1") {
  const Invocation r = invoke({"phase1", "--n", "16"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\"gap_decimal\":\"0.02070\"") != std::string::npos);
  const Invocation parallel = invoke({"phase1", "--n", "16", "--jobs", "3"});
  const std::string published = published_quarter_code(16)->to_string();
  const std::string negated = published_quarter_code(16)->negated().to_string();
  CHECK((parallel.out.find(published) != std::string::npos || parallel.out.find(negated) != std::string::npos));
  const size_t at = r.out.find("\"gap_numerator\"");
  const std::string numerator = r.out.substr(at, r.out.find(',', at) - at);
  CHECK(parallel.out.find(numerator) != std::string::npos);
}

TEST_CASE("cli solve reproduces the octagon optimum and is deterministic") {
  const Invocation a = invoke({"solve", "--n", "8"});
  REQUIRE(a.code == 0);
  const SolutionRecord rec = parse_record(a.out);
  PrecisionScope scope(360);
  const Real table("3.12114713405983135386465950363808653090954216646976012"
                   "24524789123816403490428894959252350355455226792");
  CHECK(bmp::abs(parse_real(rec.perimeter) - table) < Real("1e-90"));
  const Invocation b = invoke({"solve", "--n", "8"});
  CHECK(to_json(parse_record(b.out), false) == to_json(rec, false));
}

TEST_CASE("cli phase2 reads a code file") {
  const std::string path = write_temp("maxperim-code.txt", "+--+-++-\n");
  const Invocation r = invoke({"phase2", "--code", path, "--variant", "minres"});
  REQUIRE(r.code == 0);
  CHECK(parse_record(r.out).variant == "minres");
  std::remove(path.c_str());
}

TEST_CASE("cli verify and export") {
  const std::string path = write_temp("maxperim-solution.json", to_json(octagon_record()));
  const Invocation q = invoke({"verify", "--poly", "q8", "--value-from", path});
  CHECK(q.code == 0);
  CHECK(q.out.find("annihilated by square") != std::string::npos);
  const Invocation e8 = invoke({"verify", "--poly", "E8", "--equilateral-octagon"});
  CHECK(e8.code == 0);
  CHECK(e8.out.find("root confirmed") != std::string::npos);
  const Invocation bad = invoke({"verify", "--poly", "E8", "--value", "0"});
  CHECK(bad.code == 1);
  CHECK(invoke({"verify", "--poly", "E8"}).code == 2);
  const Invocation closed = invoke({"verify", "--closed-form", "2 + 4 sin(pi/12)", "--value", "3.0352761804100830"});
  CHECK(closed.code == 1);

  const Invocation svg = invoke({"export", "--in", path, "--format", "svg"});
  CHECK(svg.code == 0);
  CHECK(count(svg.out, "class=\"diameter\"") == 8);
  SolutionRecord empty = octagon_record();
  empty.angles.clear();
  const std::string empty_path = write_temp("maxperim-empty.json", to_json(empty));
  const Invocation refused = invoke({"export", "--in", empty_path, "--format", "tikz"});
  CHECK(refused.code == 1);
  CHECK(refused.err.find("unverified-record") != std::string::npos);
  std::remove(path.c_str());
  std::remove(empty_path.c_str());
}

TEST_CASE("cli enumerate-solve") {
  const Invocation r = invoke({"enumerate-solve", "--n", "6", "--jobs", "2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"rank\":1") != std::string::npos);
  CHECK(count(r.out, "\n") == count_codes(6));
}
