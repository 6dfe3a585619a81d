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

#include "mwpc/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "mwpc/errors.h"
#include "mwpc/jsonl.h"

namespace mwpc {
namespace {

constexpr const char* kUndefined = "\xE2\x80\x94";  // em dash

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::vector<Dop> modes_present(const Report& report) {
  std::set<Dop> modes;
  for (const DopRow& row : report.dop_rows)
    for (const auto& [dop, _] : row.counts) modes.insert(dop);
  return {modes.begin(), modes.end()};
}

std::string e_r_text(const QuadrantCounts& q) { return format_ratio(q.srsc, q.srsc + q.ursc); }
std::string e_c_text(const QuadrantCounts& q) { return format_ratio(q.srsc, q.srsc + q.sruc); }

}  // namespace

Table1Fixture load_table1(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw DataError("Table-1 fixture not found: " + path.string());
  try {
    auto j = nlohmann::json::parse(read_file(path));
    Table1Fixture f;
    f.dataset_size = j.at("dataset_size").get<std::int64_t>();
    for (const auto& r : j.at("rows")) {
      Table1Row row;
      row.model = r.at("model").get<std::string>();
      row.printed_r_rate = r.at("r_rate").get<double>();
      row.printed_c_rate = r.at("c_rate").get<double>();
      row.counts = QuadrantCounts{r.at("srsc").get<std::int64_t>(), r.at("sruc").get<std::int64_t>(),
                                  r.at("ursc").get<std::int64_t>(), r.at("uruc").get<std::int64_t>()};
      if (row.counts.srsc < 0 || row.counts.sruc < 0 || row.counts.ursc < 0 || row.counts.uruc < 0)
        throw DataError("negative count in row " + row.model);
      f.rows.push_back(std::move(row));
    }
    if (f.rows.empty()) throw DataError("Table-1 fixture has no rows");
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("corrupt Table-1 fixture " + path.string() + ": " + e.what());
  }
}

bool VerificationReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return !checks.empty();
}

std::vector<const CheckResult*> VerificationReport::failures() const {
  std::vector<const CheckResult*> out;
  for (const auto& c : checks)
    if (!c.pass) out.push_back(&c);
  return out;
}

VerificationReport verify_table1(const Table1Fixture& fixture, double tolerance) {
  VerificationReport report;
  for (const Table1Row& row : fixture.rows) {
    const QuadrantCounts& q = row.counts;
    report.checks.push_back({row.model, "sum", q.n() == fixture.dataset_size,
                             std::to_string(q.n()) + " vs " + std::to_string(fixture.dataset_size)});
    if (q.n() == 0) {
      report.checks.push_back({row.model, "r_rate", false, "no triplets"});
      report.checks.push_back({row.model, "c_rate", false, "no triplets"});
    } else {
      Rates r = rates(q);
      report.checks.push_back({row.model, "r_rate",
                               std::fabs(r.r_rate - row.printed_r_rate) <= tolerance,
                               fixed(r.r_rate, 4) + " vs " + fixed(row.printed_r_rate, 3)});
      report.checks.push_back({row.model, "c_rate",
                               std::fabs(r.c_rate - row.printed_c_rate) <= tolerance,
                               fixed(r.c_rate, 4) + " vs " + fixed(row.printed_c_rate, 3)});
    }
    ERatios e = e_ratios(q);
    bool ordered = e.e_r && e.e_c && *e.e_r > *e.e_c;
    report.checks.push_back(
        {row.model, "e_r>e_c", ordered,
         (e.e_r ? fixed(*e.e_r, 4) : kUndefined) + std::string(" vs ") + (e.e_c ? fixed(*e.e_c, 4) : kUndefined)});
  }
  return report;
}

std::string render_verification(const VerificationReport& report) {
  std::vector<std::string> rows, columns;
  std::map<std::pair<std::string, std::string>, const CheckResult*> cell;
  for (const auto& c : report.checks) {
    if (std::find(rows.begin(), rows.end(), c.row) == rows.end()) rows.push_back(c.row);
    if (std::find(columns.begin(), columns.end(), c.check) == columns.end()) columns.push_back(c.check);
    cell[{c.row, c.check}] = &c;
  }
  std::ostringstream out;
  out << "| model |";
  for (const auto& col : columns) out << ' ' << col << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < columns.size(); ++i) out << "---|";
  out << '\n';
  for (const auto& row : rows) {
    out << "| " << row << " |";
    for (const auto& col : columns) {
      auto it = cell.find({row, col});
      if (it == cell.end()) {
        out << "  |";
        continue;
      }
      out << ' ' << (it->second->pass ? "PASS" : "FAIL") << " (" << it->second->detail << ") |";
    }
    out << '\n';
  }
  auto failures = report.failures();
  out << '\n'
      << (failures.empty() ? "all checks passed" : std::to_string(failures.size()) + " check(s) failed")
      << " (" << report.checks.size() << " total)\n";
  return out.str();
}

Report build_report(std::span<const ScoredOutcome> outcomes,
                    const std::optional<BootstrapOptions>& bootstrap, std::string source) {
  Report report;
  report.source = std::move(source);
  report.rate_reports = build_rate_reports(outcomes, bootstrap);
  std::map<std::string, DopRow> rows;
  for (const ScoredOutcome& s : outcomes) {
    if (s.outcome.mode.task() != Task::kCorrection) continue;
    DopRow& row = rows[s.model];
    row.model = s.model;
    auto& [ok, total] = row.counts[*s.outcome.mode.dop()];
    ok += s.outcome.success ? 1 : 0;
    ++total;
  }
  for (auto& [_, row] : rows) report.dop_rows.push_back(std::move(row));
  return report;
}

Report report_from_table1(const Table1Fixture& fixture, std::string source) {
  Report report;
  report.source = std::move(source);
  for (const Table1Row& row : fixture.rows) {
    report.rate_reports.push_back(make_rate_report(row.model, Dop::kSP, row.counts));
    DopRow dop;
    dop.model = row.model;
    dop.counts[Dop::kSP] = {row.counts.srsc + row.counts.ursc, row.counts.n()};
    report.dop_rows.push_back(std::move(dop));
  }
  return report;
}

std::string render_markdown(const Report& report) {
  std::ostringstream out;
  out << "# Reasoning vs correction report\n\n";
  if (!report.source.empty()) out << "Source: " << report.source << "\n\n";
  out << "## Joint outcomes\n\n"
      << "| Model | Mode | R-rate | C-rate | sR+sC | sR+uC | uR+sC | uR+uC | E_r | E_c |\n"
      << "|---|---|---|---|---|---|---|---|---|---|\n";
  for (const RateReport& r : report.rate_reports) {
    const QuadrantCounts& q = r.quadrants;
    out << "| " << r.model << " | " << to_string(r.mode) << " | " << format_ratio(q.srsc + q.sruc, q.n())
        << " | " << format_ratio(q.srsc + q.ursc, q.n()) << " | " << q.srsc << " | " << q.sruc << " | "
        << q.ursc << " | " << q.uruc << " | " << e_r_text(q) << " | " << e_c_text(q) << " |\n";
  }
  bool any_ci = false;
  for (const RateReport& r : report.rate_reports) any_ci = any_ci || r.ci.has_value();
  if (any_ci) {
    out << "\n## Bootstrap intervals\n\n| Model | Mode | R-rate CI | C-rate CI |\n|---|---|---|---|\n";
    for (const RateReport& r : report.rate_reports) {
      if (!r.ci) continue;
      out << "| " << r.model << " | " << to_string(r.mode) << " | [" << format_rate(r.ci->r_rate.low) << ", "
          << format_rate(r.ci->r_rate.high) << "] | [" << format_rate(r.ci->c_rate.low) << ", "
          << format_rate(r.ci->c_rate.high) << "] |\n";
    }
    const auto& opts = report.rate_reports.front().ci ? report.rate_reports.front().ci->options
                                                      : BootstrapOptions{};
    out << "\nPercentile bootstrap, level " << fixed(opts.level, 2) << ", " << opts.resamples
        << " resamples, seed " << opts.seed << ".\n";
  }
  auto modes = modes_present(report);
  if (!modes.empty()) {
    out << "\n## Correction pass rate by prompting mode\n\n| Model |";
    for (Dop d : modes) out << ' ' << to_string(d) << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < modes.size(); ++i) out << "---|";
    out << '\n';
    for (const DopRow& row : report.dop_rows) {
      out << "| " << row.model << " |";
      for (Dop d : modes) {
        auto it = row.counts.find(d);
        out << ' ' << (it == row.counts.end() ? std::string(kUndefined) : format_ratio(it->second.first, it->second.second))
            << " |";
      }
      out << '\n';
    }
  }
  return out.str();
}

std::string render_csv(const Report& report) {
  std::ostringstream out;
  out << "model,mode,n,srsc,sruc,ursc,uruc,r_rate,c_rate,e_r,e_c\n";
  for (const RateReport& r : report.rate_reports) {
    const QuadrantCounts& q = r.quadrants;
    auto ratio = [](std::int64_t num, std::int64_t den) {
      return den > 0 ? format_ratio(num, den) : std::string();
    };
    out << csv_field(r.model) << ',' << to_string(r.mode) << ',' << q.n() << ',' << q.srsc << ',' << q.sruc << ','
        << q.ursc << ',' << q.uruc << ',' << ratio(q.srsc + q.sruc, q.n()) << ',' << ratio(q.srsc + q.ursc, q.n())
        << ',' << ratio(q.srsc, q.srsc + q.ursc) << ',' << ratio(q.srsc, q.srsc + q.sruc) << '\n';
  }
  return out.str();
}

nlohmann::ordered_json chart_data(const Report& report) {
  nlohmann::ordered_json j;
  j["source"] = report.source;
  j["series"] = nlohmann::ordered_json::array();
  for (Dop d : modes_present(report)) {
    nlohmann::ordered_json series;
    series["mode"] = to_string(d);
    series["points"] = nlohmann::ordered_json::array();
    for (const DopRow& row : report.dop_rows) {
      auto it = row.counts.find(d);
      if (it == row.counts.end()) continue;
      series["points"].push_back(
          {{"model", row.model},
           {"c_rate", static_cast<double>(it->second.first) / static_cast<double>(it->second.second)},
           {"n", it->second.second}});
    }
    j["series"].push_back(std::move(series));
  }
  j["e_ratios"] = nlohmann::ordered_json::array();
  for (const RateReport& r : report.rate_reports) {
    j["e_ratios"].push_back({{"model", r.model},
                             {"mode", to_string(r.mode)},
                             {"e_r", r.e.e_r ? nlohmann::ordered_json(*r.e.e_r) : nlohmann::ordered_json(nullptr)},
                             {"e_c", r.e.e_c ? nlohmann::ordered_json(*r.e.e_c) : nlohmann::ordered_json(nullptr)}});
  }
  return j;
}

nlohmann::ordered_json metrics_json(const Report& report) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const RateReport& r : report.rate_reports) j.push_back(rate_report_to_json(r));
  return j;
}

std::string render_svg(const Report& report) {
  auto modes = modes_present(report);
  const int bar_w = 18, gap = 24, chart_h = 200, top = 30, left = 40;
  const int group_w = static_cast<int>(modes.size()) * bar_w + gap;
  const int width = left + std::max<int>(1, static_cast<int>(report.dop_rows.size())) * group_w + 20;
  const int height = top + chart_h + 60;
  static const char* kColors[] = {"#8c8c8c", "#4e79a7", "#f28e2b", "#59a14f"};
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  out << "<text x=\"" << left << "\" y=\"18\" font-size=\"12\">Correction pass rate by mode</text>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top + chart_h << "\" x2=\"" << width - 10 << "\" y2=\""
      << top + chart_h << "\" stroke=\"black\"/>\n";
  for (std::size_t g = 0; g < report.dop_rows.size(); ++g) {
    const DopRow& row = report.dop_rows[g];
    int x0 = left + static_cast<int>(g) * group_w + gap / 2;
    for (std::size_t m = 0; m < modes.size(); ++m) {
      auto it = row.counts.find(modes[m]);
      if (it == row.counts.end()) continue;
      double rate = static_cast<double>(it->second.first) / static_cast<double>(it->second.second);
      int h = static_cast<int>(std::lround(rate * chart_h));
      out << "<rect x=\"" << x0 + static_cast<int>(m) * bar_w << "\" y=\"" << top + chart_h - h << "\" width=\""
          << bar_w - 2 << "\" height=\"" << h << "\" fill=\"" << kColors[static_cast<int>(modes[m]) % 4]
          << "\"><title>" << xml_escape(row.model) << ' ' << to_string(modes[m]) << ' '
          << format_ratio(it->second.first, it->second.second) << "</title></rect>\n";
    }
    out << "<text x=\"" << x0 << "\" y=\"" << top + chart_h + 14 << "\" font-size=\"9\">" << xml_escape(row.model)
        << "</text>\n";
  }
  for (std::size_t m = 0; m < modes.size(); ++m) {
    int x = left + static_cast<int>(m) * 80;
    out << "<rect x=\"" << x << "\" y=\"" << height - 20 << "\" width=\"10\" height=\"10\" fill=\""
        << kColors[static_cast<int>(modes[m]) % 4] << "\"/><text x=\"" << x + 14 << "\" y=\"" << height - 11
        << "\" font-size=\"10\">" << to_string(modes[m]) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void write_report_files(const std::filesystem::path& dir, const Report& report) {
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "report.md", render_markdown(report));
  write_file_atomic(dir / "report.csv", render_csv(report));
  write_file_atomic(dir / "chart_data.json", chart_data(report).dump(2) + "\n");
  write_file_atomic(dir / "metrics.json", metrics_json(report).dump(2) + "\n");
  write_file_atomic(dir / "chart.svg", render_svg(report));
}

}  // namespace mwpc
