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

// Serialized solutions and their export formats.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "maxperim/geometry.hpp"
#include "maxperim/phase2.hpp"

namespace maxperim {

inline constexpr int kSchemaVersion = 1;

/// Wall-clock measurements. Excluded from the canonical payload.
struct Timings {
  std::optional<double> phase1_seconds;
  std::optional<double> phase2_seconds;
  std::optional<double> total_seconds;

  friend bool operator==(const Timings&, const Timings&) = default;
};

/// A solved polygon with every real rendered as a decimal string carrying
/// decimal_digits_for_bits(precision_bits) significant digits.
struct SolutionRecord {
  int schema_version = kSchemaVersion;
  int n = 0;
  std::string code;  // half code
  std::optional<std::string> quarter_code;
  std::vector<std::string> angles;       // phi_1..phi_{n+1}
  std::vector<std::string> multipliers;  // y1, y2
  std::vector<std::pair<std::string, std::string>> vertices;
  std::string perimeter;
  std::string gap;
  unsigned precision_bits = 0;
  unsigned tol_bits = 0;
  std::string variant;
  int iterations = 0;
  Timings timings;

  friend bool operator==(const SolutionRecord&, const SolutionRecord&) = default;
};

SolutionRecord make_record(const PolygonSolution& polygon, const NewtonResult& newton,
                           const std::optional<QuarterCode>& quarter = std::nullopt,
                           const Timings& timings = {});

/// Keys in sorted order, two-space indentation. The "metadata" object holding
/// the timings is written only when `with_metadata` is set.
std::string to_json(const SolutionRecord& record, bool with_metadata = true);

/// Throws parse-error on malformed input or an unknown schema version.
SolutionRecord parse_record(std::string_view json);

/// Rebuilds the polygon from the stored angles at the stored precision and
/// checks the code, the perimeter and the smallness. Throws unverified-record
/// when the record has no angles or any check fails.
PolygonSolution verify_record(const SolutionRecord& record);

enum class ExportFormat { json, csv, svg, tikz };

std::string_view to_string(ExportFormat f);
ExportFormat parse_export_format(std::string_view text);

/// json: to_json without metadata. csv: "index,x,y" rows of the stored
/// vertices. svg, tikz: black boundary and gray diameter chords of the
/// verified polygon; refused with unverified-record otherwise.
std::string export_record(const SolutionRecord& record, ExportFormat format);

}  // namespace maxperim
