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


#include "maxperim/record.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

#include <json.hpp>

#include "maxperim/error.hpp"

namespace maxperim {

namespace {

using nlohmann::json;

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

json timings_json(const Timings& t) {
  json out = json::object();
  if (t.phase1_seconds) out["phase1_seconds"] = *t.phase1_seconds;
  if (t.phase2_seconds) out["phase2_seconds"] = *t.phase2_seconds;
  if (t.total_seconds) out["total_seconds"] = *t.total_seconds;
  return out;
}

std::optional<double> optional_seconds(const json& obj, const char* key) {
  if (!obj.contains(key)) return std::nullopt;
  return obj.at(key).get<double>();
}

Error unverified(const std::string& why) { return Error(ErrorKind::unverified_record, why); }

struct Frame {
  double min_x, max_y, scale, margin;
  double x(const Complex& v) const { return margin + (to_double(v.re) - min_x) * scale; }
  double y(const Complex& v) const { return margin + (max_y - to_double(v.im)) * scale; }
};

std::string svg(const PolygonSolution& poly, const DiameterGraph& graph) {
  constexpr double scale = 400.0;
  constexpr double margin = 20.0;
  double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
  double min_y = min_x, max_y = -min_x;
  for (const Complex& v : poly.vertices) {
    min_x = std::min(min_x, to_double(v.re));
    max_x = std::max(max_x, to_double(v.re));
    min_y = std::min(min_y, to_double(v.im));
    max_y = std::max(max_y, to_double(v.im));
  }
  const Frame f{min_x, max_y, scale, margin};
  const std::string w = fixed6(2 * margin + (max_x - min_x) * scale);
  const std::string h = fixed6(2 * margin + (max_y - min_y) * scale);
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + w + "\" height=\"" + h +
                    "\" viewBox=\"0 0 " + w + " " + h + "\">\n";
  auto line = [&](const Complex& a, const Complex& b, const char* cls) {
    out += "  <line class=\"" + std::string(cls) + "\" x1=\"" + fixed6(f.x(a)) + "\" y1=\"" + fixed6(f.y(a)) +
           "\" x2=\"" + fixed6(f.x(b)) + "\" y2=\"" + fixed6(f.y(b)) + "\"/>\n";
  };
  out += " <g stroke=\"gray\" stroke-width=\"1\">\n";
  for (const auto& [i, j] : graph.edges) line(poly.vertices[static_cast<size_t>(i)], poly.vertices[static_cast<size_t>(j)], "diameter");
  out += " </g>\n <g stroke=\"black\" stroke-width=\"2\">\n";
  const size_t n = poly.vertices.size();
  for (size_t k = 0; k < n; ++k) line(poly.vertices[k], poly.vertices[(k + 1) % n], "side");
  out += " </g>\n</svg>\n";
  return out;
}

std::string tikz(const PolygonSolution& poly, const DiameterGraph& graph) {
  auto pt = [](const Complex& v) { return "(" + fixed6(to_double(v.re)) + "," + fixed6(to_double(v.im)) + ")"; };
  std::string out = "\\begin{tikzpicture}[scale=5]\n";
  for (const auto& [i, j] : graph.edges) {
    out += "  \\draw[gray] " + pt(poly.vertices[static_cast<size_t>(i)]) + " -- " +
           pt(poly.vertices[static_cast<size_t>(j)]) + ";\n";
  }
  out += "  \\draw[black, thick] ";
  for (const Complex& v : poly.vertices) out += pt(v) + " -- ";
  out += "cycle;\n\\end{tikzpicture}\n";
  return out;
}

}  // namespace

SolutionRecord make_record(const PolygonSolution& polygon, const NewtonResult& newton,
                           const std::optional<QuarterCode>& quarter, const Timings& timings) {
  SolutionRecord r;
  const int digits = decimal_digits_for_bits(polygon.precision_bits);
  r.n = polygon.n;
  r.code = polygon.code.to_string();
  if (quarter) r.quarter_code = quarter->to_string();
  for (const Real& a : polygon.angles.phi) r.angles.push_back(to_decimal(a, digits));
  r.multipliers = {to_decimal(newton.state.y1, digits), to_decimal(newton.state.y2, digits)};
  for (const Complex& v : polygon.vertices) r.vertices.emplace_back(to_decimal(v.re, digits), to_decimal(v.im, digits));
  r.perimeter = to_decimal(polygon.perimeter, digits);
  r.gap = to_decimal(polygon.gap, digits);
  r.precision_bits = polygon.precision_bits;
  r.tol_bits = polygon.tol_bits;
  r.variant = std::string(to_string(newton.report.variant));
  r.iterations = newton.report.iterations;
  r.timings = timings;
  return r;
}

std::string to_json(const SolutionRecord& r, bool with_metadata) {
  json j;
  j["schema_version"] = r.schema_version;
  j["n"] = r.n;
  j["code"] = r.code;
  j["quarter_code"] = r.quarter_code ? json(*r.quarter_code) : json(nullptr);
  j["angles"] = r.angles;
  j["multipliers"] = r.multipliers;
  json verts = json::array();
  for (const auto& [x, y] : r.vertices) verts.push_back({x, y});
  j["vertices"] = verts;
  j["perimeter"] = r.perimeter;
  j["gap"] = r.gap;
  j["precision_bits"] = r.precision_bits;
  j["tol_bits"] = r.tol_bits;
  j["variant"] = r.variant;
  j["iterations"] = r.iterations;
  if (with_metadata) j["metadata"] = json{{"timings", timings_json(r.timings)}};
  return j.dump(2) + "\n";
}

SolutionRecord parse_record(std::string_view text) {
  try {
    const json j = json::parse(text);
    SolutionRecord r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kSchemaVersion) {
      throw Error(ErrorKind::parse_error, "unsupported schema version " + std::to_string(r.schema_version));
    }
    r.n = j.at("n").get<int>();
    r.code = j.at("code").get<std::string>();
    if (!j.at("quarter_code").is_null()) r.quarter_code = j.at("quarter_code").get<std::string>();
    r.angles = j.at("angles").get<std::vector<std::string>>();
    r.multipliers = j.at("multipliers").get<std::vector<std::string>>();
    for (const json& v : j.at("vertices")) {
      if (!v.is_array() || v.size() != 2) throw Error(ErrorKind::parse_error, "vertex is not a pair");
      r.vertices.emplace_back(v[0].get<std::string>(), v[1].get<std::string>());
    }
    r.perimeter = j.at("perimeter").get<std::string>();
    r.gap = j.at("gap").get<std::string>();
    r.precision_bits = j.at("precision_bits").get<unsigned>();
    r.tol_bits = j.at("tol_bits").get<unsigned>();
    r.variant = j.at("variant").get<std::string>();
    r.iterations = j.at("iterations").get<int>();
    if (j.contains("metadata") && j.at("metadata").contains("timings")) {
      const json& t = j.at("metadata").at("timings");
      r.timings.phase1_seconds = optional_seconds(t, "phase1_seconds");
      r.timings.phase2_seconds = optional_seconds(t, "phase2_seconds");
      r.timings.total_seconds = optional_seconds(t, "total_seconds");
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse_error, std::string("malformed solution record: ") + e.what());
  }
}

PolygonSolution verify_record(const SolutionRecord& r) {
  if (r.angles.empty()) throw unverified("record has no angles");
  if (r.n < 3 || r.angles.size() != static_cast<size_t>(r.n) + 1) throw unverified("angle count does not match n");
  if (r.precision_bits <= r.tol_bits) throw unverified("precision does not exceed tolerance");
  PrecisionScope scope(r.precision_bits);
  try {
    const Code code = Code::parse(r.code);
    if (code.n() != r.n) throw unverified("code length does not match n");
    AngleVector angles{r.n, {}, r.precision_bits};
    for (const std::string& a : r.angles) angles.phi.push_back(parse_real(a));
    PolygonSolution poly = reconstruct(code, angles, r.tol_bits);
    if (!zonogon_check(poly).code_matches) throw unverified("zonogon traversal differs from the code");
    const Real tol = ldexp2(8 - static_cast<long>(r.tol_bits));
    if (boost::multiprecision::abs(poly.perimeter - parse_real(r.perimeter)) > tol) {
      throw unverified("stored perimeter differs from the rebuilt polygon");
    }
    return poly;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::unverified_record) throw;
    throw unverified(std::string(to_string(e.kind())) + ": " + e.what());
  }
}

std::string_view to_string(ExportFormat f) {
  switch (f) {
    case ExportFormat::json: return "json";
    case ExportFormat::csv: return "csv";
    case ExportFormat::svg: return "svg";
    case ExportFormat::tikz: return "tikz";
  }
  return "json";
}

ExportFormat parse_export_format(std::string_view text) {
  for (ExportFormat f : {ExportFormat::json, ExportFormat::csv, ExportFormat::svg, ExportFormat::tikz}) {
    if (text == to_string(f)) return f;
  }
  throw Error(ErrorKind::parse_error, "unknown export format '" + std::string(text) + "'");
}

std::string export_record(const SolutionRecord& r, ExportFormat format) {
  switch (format) {
    case ExportFormat::json: return to_json(r, false);
    case ExportFormat::csv: {
      std::string out = "index,x,y\n";
      for (size_t k = 0; k < r.vertices.size(); ++k) {
        out += std::to_string(k) + "," + r.vertices[k].first + "," + r.vertices[k].second + "\n";
      }
      return out;
    }
    case ExportFormat::svg:
    case ExportFormat::tikz: break;
  }
  const PolygonSolution poly = verify_record(r);
  PrecisionScope scope(r.precision_bits);
  const DiameterGraph graph = diameter_graph(poly, default_unit_tolerance(r.tol_bits));
  return format == ExportFormat::svg ? svg(poly, graph) : tikz(poly, graph);
}

}  // namespace maxperim
