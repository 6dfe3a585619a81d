// Copyright 2026 The MWPC Harness Authors.
// SPDX-License-Identifier: Apache-2.0
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

#ifndef MWPC_REPORT_H_
#define MWPC_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mwpc/metrics.h"
#include "mwpc/scoring.h"

namespace mwpc {

// One published comparison row: printed rates plus the four joint counts.
struct Table1Row {
  std::string model;
  double printed_r_rate = 0.0;
  double printed_c_rate = 0.0;
  QuadrantCounts counts;
};

struct Table1Fixture {
  std::int64_t dataset_size = 0;
  std::vector<Table1Row> rows;
};

// Throws DataError when the file is missing or malformed.
Table1Fixture load_table1(const std::filesystem::path& path);

inline constexpr double kRateTolerance = 0.002;

struct CheckResult {
  std::string row;
  std::string check;  // "sum", "r_rate", "c_rate", "e_r>e_c"
  bool pass = false;
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool all_pass() const;
  std::vector<const CheckResult*> failures() const;
};

// Recomputes each row's rates from its counts (over the row's own total),
// compares them with the printed values within `tolerance`, checks that each
// row sums to the dataset size, and that e_r > e_c.
VerificationReport verify_table1(const Table1Fixture& fixture, double tolerance = kRateTolerance);

// Pass/fail matrix, one row per model, one column per check.
std::string render_verification(const VerificationReport& report);

// Correction successes/total per mode for one model.
struct DopRow {
  std::string model;
  std::map<Dop, std::pair<std::int64_t, std::int64_t>> counts;
};

struct Report {
  std::string source;
  std::vector<RateReport> rate_reports;
  std::vector<DopRow> dop_rows;
};

Report build_report(std::span<const ScoredOutcome> outcomes,
                    const std::optional<BootstrapOptions>& bootstrap, std::string source);

// Table-1 rows as SP reports (no bootstrap: the raw outcomes are not known).
Report report_from_table1(const Table1Fixture& fixture, std::string source);

std::string render_markdown(const Report& report);
std::string render_csv(const Report& report);
// {"series": [{"mode", "points": [{"model", "c_rate"}]}], "e_ratios": [...]}
nlohmann::ordered_json chart_data(const Report& report);
nlohmann::ordered_json metrics_json(const Report& report);
// Grouped bar chart of correction pass rate per mode and model.
std::string render_svg(const Report& report);

// Writes report.md, report.csv, chart_data.json, metrics.json and chart.svg.
// Output bytes depend only on `report`.
void write_report_files(const std::filesystem::path& dir, const Report& report);

}  // namespace mwpc

#endif  // MWPC_REPORT_H_
